#include "witnesskit/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "witnesskit/tolerances.hpp"
#include "witnesskit/tomo.hpp"

namespace wk {

namespace {

bool next_tuple(std::vector<std::size_t>& mu, const std::vector<std::size_t>& radices) {
    for (std::size_t k = mu.size(); k-- > 0;) {
        if (++mu[k] < radices[k]) {
            return true;
        }
        mu[k] = 0;
    }
    return false;
}

struct SettingDistribution {
    std::vector<double> probs;
    std::vector<double> values;  // product of per-party eigenvalues
};

// Joint outcome distribution for measuring the mu-indexed basis operators.
// Identity slots are left unmeasured: one outcome, value 1, projector I.
SettingDistribution outcome_distribution(const DensityOperator& rho,
                                         const std::vector<std::size_t>& mu) {
    struct PartyOutcome {
        ComplexMatrix proj;
        double value;
    };
    const std::size_t nparties = rho.dims.size();
    std::vector<std::vector<PartyOutcome>> options(nparties);
    for (std::size_t k = 0; k < nparties; ++k) {
        const std::size_t d = rho.dims[k];
        if (mu[k] == 0) {
            options[k].push_back({ComplexMatrix::identity(d), 1.0});
            continue;
        }
        const TomographicBasis basis = gellmann_basis(d);
        if (mu[k] >= basis.ops.size()) {
            throw std::out_of_range("run_sampled: setting index out of range");
        }
        const Spectrum sp = hermitian_eig(basis.ops[mu[k]]);
        for (std::size_t a = 0; a < d; ++a) {
            ComplexMatrix proj(d, d);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    proj.at(i, j) = sp.eigenvectors.at(i, a) * std::conj(sp.eigenvectors.at(j, a));
                }
            }
            options[k].push_back({std::move(proj), sp.eigenvalues[a]});
        }
    }
    std::vector<std::size_t> counts(nparties);
    for (std::size_t k = 0; k < nparties; ++k) {
        counts[k] = options[k].size();
    }
    SettingDistribution dist;
    std::vector<std::size_t> pick(nparties, 0);
    double total = 0.0;
    do {
        ComplexMatrix m = options[0][pick[0]].proj;
        double value = options[0][pick[0]].value;
        for (std::size_t k = 1; k < nparties; ++k) {
            m = tensor_product(m, options[k][pick[k]].proj);
            value *= options[k][pick[k]].value;
        }
        const double p = std::max(hs_inner(m, rho.matrix), 0.0);
        dist.probs.push_back(p);
        dist.values.push_back(value);
        total += p;
    } while (next_tuple(pick, counts));
    if (total <= 0.0) {
        throw std::runtime_error("run_sampled: degenerate outcome distribution");
    }
    for (double& p : dist.probs) {
        p /= total;
    }
    return dist;
}

// Multinomial draw by peeling one binomial per outcome.
std::vector<long long> sample_counts(const std::vector<double>& probs, long long shots,
                                     std::mt19937_64& rng) {
    std::vector<long long> counts(probs.size(), 0);
    long long remaining = shots;
    double prest = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        if (remaining == 0) {
            break;
        }
        double pc = prest > 0.0 ? probs[i] / prest : 0.0;
        pc = std::clamp(pc, 0.0, 1.0);
        std::binomial_distribution<long long> bin(remaining, pc);
        counts[i] = bin(rng);
        remaining -= counts[i];
        prest -= probs[i];
    }
    counts.back() += remaining;
    return counts;
}

}  // namespace

const char* to_string(RunVerdict v) {
    switch (v) {
        case RunVerdict::Entangled:
            return "Entangled";
        case RunVerdict::Pending:
            return "Pending";
        default:
            return "ExhaustedInconclusive";
    }
}

MeasurementPlan make_plan(const QuadraticIdentifier& q, PlanPolicy policy, std::uint64_t seed) {
    MeasurementPlan plan;
    plan.source = q;
    const auto radices = q.weights.radices();
    std::vector<std::size_t> mu(q.weights.dims.size(), 0);
    std::size_t i = 0;
    do {
        const double w = q.weights.values[i++];
        if (w > 0.0) {
            plan.settings.push_back({mu, w});
        }
    } while (next_tuple(mu, radices));
    switch (policy) {
        case PlanPolicy::DescendingWeight:
            std::stable_sort(plan.settings.begin(), plan.settings.end(),
                             [](const PlanSetting& a, const PlanSetting& b) {
                                 if (a.weight != b.weight) {
                                     return a.weight > b.weight;
                                 }
                                 return a.mu < b.mu;
                             });
            break;
        case PlanPolicy::GivenOrder:
            break;
        case PlanPolicy::Random: {
            std::mt19937_64 rng(seed);
            std::shuffle(plan.settings.begin(), plan.settings.end(), rng);
            break;
        }
    }
    return plan;
}

IncrementalRun run_exact(const MeasurementPlan& plan, const DensityOperator& rho) {
    if (rho.dims != plan.source.weights.dims) {
        throw std::invalid_argument("run_exact: state dims do not match the plan");
    }
    const ExtendedCorrelationTensor t = state_to_tensor(rho, plan.source.eval_convention);
    IncrementalRun run;
    run.bound = bound_used(plan.source);
    for (const PlanSetting& s : plan.settings) {
        const double tv = t.at(s.mu);
        const double c = s.weight * tv * tv;
        run.partial_sum += c;
        run.steps.push_back({s.mu, tv, c});
        if (run.partial_sum > run.bound + tol().detection_margin) {
            run.verdict = RunVerdict::Entangled;
            return run;
        }
    }
    run.verdict = RunVerdict::ExhaustedInconclusive;
    return run;
}

IncrementalRun run_sampled(const MeasurementPlan& plan, const DensityOperator& rho,
                           const ShotModel& model) {
    if (rho.dims != plan.source.weights.dims) {
        throw std::invalid_argument("run_sampled: state dims do not match the plan");
    }
    if (model.shots < 1) {
        throw std::invalid_argument("run_sampled: shots must be >= 1");
    }
    if (model.z < 0.0) {
        throw std::invalid_argument("run_sampled: z must be >= 0");
    }
    const bool scaled = plan.source.eval_convention == Convention::QuditScaled;
    const double moment_scale =
        scaled ? static_cast<double>(rho.dims[0]) / (2.0 * (static_cast<double>(rho.dims[0]) - 1.0))
               : 1.0;
    std::mt19937_64 rng(model.seed);
    IncrementalRun run;
    run.bound = bound_used(plan.source);
    double raw_sum = 0.0;
    for (const PlanSetting& s : plan.settings) {
        const SettingDistribution dist = outcome_distribution(rho, s.mu);
        const auto counts = sample_counts(dist.probs, model.shots, rng);
        double sum1 = 0.0;
        double sum2 = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double n = static_cast<double>(counts[i]);
            sum1 += n * dist.values[i];
            sum2 += n * dist.values[i] * dist.values[i];
        }
        const double shots = static_cast<double>(model.shots);
        double that = sum1 / shots;
        double margin = 0.0;
        if (model.z > 0.0) {
            if (model.shots < 2) {
                margin = std::numeric_limits<double>::infinity();
            } else {
                const double var = std::max(sum2 - shots * that * that, 0.0) / (shots - 1.0);
                margin = model.z * std::sqrt(var / shots);
            }
        }
        // scaled conventions rescale the correlation block; identity rows
        // stay raw
        bool correlation_slot = true;
        for (std::size_t m : s.mu) {
            correlation_slot = correlation_slot && m != 0;
        }
        const double f = (scaled && correlation_slot) ? moment_scale : 1.0;
        that *= f;
        margin *= f;
        const double counted = std::max(0.0, std::fabs(that) - margin);
        const double c = s.weight * counted * counted;
        raw_sum += s.weight * that * that;
        run.partial_sum += c;
        run.steps.push_back({s.mu, that, c});
        if (run.partial_sum > run.bound + tol().detection_margin) {
            run.verdict = RunVerdict::Entangled;
            return run;
        }
    }
    run.verdict = raw_sum > run.bound + tol().detection_margin ? RunVerdict::Pending
                                                               : RunVerdict::ExhaustedInconclusive;
    return run;
}

std::string run_to_csv(const IncrementalRun& run) {
    std::string out = "step,mu_indices,T_estimate,contribution,partial_sum,bound,verdict\n";
    char buf[40];
    double partial = 0.0;
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const StepRecord& s = run.steps[i];
        partial += s.contribution;
        out += std::to_string(i + 1) + ",";
        for (std::size_t k = 0; k < s.mu.size(); ++k) {
            if (k > 0) {
                out += "-";
            }
            out += std::to_string(s.mu[k]);
        }
        const double cols[4] = {s.t_estimate, s.contribution, partial, run.bound};
        for (double v : cols) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out += buf;
        }
        out += ",";
        out += (i + 1 == run.steps.size()) ? to_string(run.verdict) : "Pending";
        out += "\n";
    }
    return out;
}

}  // namespace wk
