#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "witnesskit/densop.hpp"
#include "witnesskit/witness.hpp"

namespace wk {

// DescendingWeight front-loads the largest squared coefficients (ties broken
// by ascending index tuple), GivenOrder keeps the tensor's row-major order,
// Random shuffles with the provided seed.
enum class PlanPolicy { DescendingWeight, GivenOrder, Random };

struct PlanSetting {
    std::vector<std::size_t> mu;
    double weight = 0.0;  // strictly positive; zero-weight settings are dropped
};

// Ordered measurement schedule for one quadratic identifier. The identifier
// travels with the plan so runs know the moment convention and the bound.
struct MeasurementPlan {
    std::vector<PlanSetting> settings;
    QuadraticIdentifier source;
};

MeasurementPlan make_plan(const QuadraticIdentifier& q,
                          PlanPolicy policy = PlanPolicy::DescendingWeight,
                          std::uint64_t seed = 0);

enum class RunVerdict { Entangled, Pending, ExhaustedInconclusive };

const char* to_string(RunVerdict v);

struct StepRecord {
    std::vector<std::size_t> mu;
    double t_estimate = 0.0;   // exact moment, or the shot average
    double contribution = 0.0; // weight times the counted value squared, never negative
};

struct IncrementalRun {
    double partial_sum = 0.0;  // the accumulated sum verdicts are tested against
    double bound = 0.0;
    std::vector<StepRecord> steps;
    RunVerdict verdict = RunVerdict::ExhaustedInconclusive;
};

struct ShotModel {
    long long shots = 1000;
    std::uint64_t seed = 1;
    double z = 3.0;  // confidence margin in standard errors
};

// Consumes settings in order with exact moments; stops at the first partial
// sum exceeding the bound. Never returns Pending.
IncrementalRun run_exact(const MeasurementPlan& plan, const DensityOperator& rho);

// Draws finite-shot outcomes per setting from the exact joint eigenbasis
// distribution. A step contributes weight * max(0, |T_hat| - z*se)^2, so
// noise can only delay detection, not fake it. Pending means the raw
// estimate sum crossed the bound but the conservative one did not.
IncrementalRun run_sampled(const MeasurementPlan& plan, const DensityOperator& rho,
                           const ShotModel& model);

// step,mu_indices,T_estimate,contribution,partial_sum,bound,verdict with
// dash-joined indices; every row before the last reads Pending.
std::string run_to_csv(const IncrementalRun& run);

}  // namespace wk
