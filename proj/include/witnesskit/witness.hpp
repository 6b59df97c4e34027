#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "witnesskit/densop.hpp"
#include "witnesskit/states.hpp"
#include "witnesskit/tomo.hpp"

namespace wk {

// Difference of two RawMoment tensors; the all-identity slot is exactly zero
// and entries below the zero_weight tolerance are flushed to zero.
using DeltaTensor = ExtendedCorrelationTensor;

DeltaTensor delta_tensor(const DensityOperator& rho, const DensityOperator& rho0);

struct SeeSawOptions {
    int starts = 64;
    int max_sweeps = 500;
    std::uint64_t seed = 9241;
};

// Interval around the true maximum of Tr(k sigma) over pure product states:
// lower is achieved by an explicit product state found by alternating
// top-eigenvector updates; upper is min(largest eigenvalue, bipartite
// correlation-block singular value bound when k has no local-average parts).
struct OverlapBound {
    double lower = 0.0;
    double upper = 0.0;
    bool monotone = true;  // no objective decrease was observed in any sweep
};

OverlapBound max_product_overlap(const ComplexMatrix& k, const std::vector<std::size_t>& dims,
                                 const SeeSawOptions& opt = {});

enum class BoundProvenance { ClosedForm, SeeSaw };

struct LinearWitness {
    DeltaTensor delta;           // normalized coefficients D
    double normalization = 1.0;  // divisor applied to the raw difference tensor
    double bound_lower = 0.0;
    double bound_upper = 0.0;
    BoundProvenance provenance = BoundProvenance::SeeSaw;
    // rho0 was the exact Euclidean projection onto the trace-one PPT set and
    // the difference is nonzero; the projection inner product is then itself
    // a valid separable bound and any excess certifies entanglement.
    bool npt_certified = false;
};

struct QuadraticIdentifier {
    ExtendedCorrelationTensor weights;  // squared coefficients, all >= 0
    Convention eval_convention = Convention::RawMoment;
    double bound_lower = 0.0;
    double bound_upper = 0.0;
    BoundProvenance provenance = BoundProvenance::SeeSaw;
    bool npt_certified = false;
};

// Bound an Entangled verdict is tested against: the certified cases may use
// the interval's lower end, everything else uses the sound upper end.
double bound_used(const LinearWitness& w);
double bound_used(const QuadraticIdentifier& q);

enum class Verdict { Entangled, Inconclusive };

struct DetectionTerm {
    std::vector<std::size_t> mu;
    double contribution;
};

struct DetectionReport {
    double value = 0.0;
    double bound_used = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<DetectionTerm> terms;
};

struct WitnessOptions {
    // When the input is a recognized family member, closed-form bounds
    // replace the see-saw interval (werner, belldiag, wstate; colored at
    // p = 2/3; isotropic quadratic only).
    std::optional<FamilySpec> family;
    // rho0 is the exact PPT projection of rho (closest_ppt fixed point).
    bool rho0_is_ppt_projection = false;
    SeeSawOptions seesaw;
};

LinearWitness build_linear(const DensityOperator& rho, const DensityOperator& rho0,
                           const WitnessOptions& opt = {});
QuadraticIdentifier build_quadratic(const DensityOperator& rho, const DensityOperator& rho0,
                                    const WitnessOptions& opt = {});

DetectionReport evaluate(const LinearWitness& w, const DensityOperator& rho);
DetectionReport evaluate(const QuadraticIdentifier& q, const DensityOperator& rho);

// Sum of squared scaled correlations against the correlation-block largest
// singular value. Bipartite equal dimensions only.
DetectionReport sum_squares_criterion(const DensityOperator& rho);

// The four sign-pattern inequalities for states with maximally mixed
// marginals. Terms: one per inequality (mu = {j}), plus the absolute-value
// sum |T_xx|+|T_yy|+|T_zz| under an empty index tuple. Throws when local
// averages are not vanishing.
DetectionReport bell_diagonal_criteria(const ExtendedCorrelationTensor& t);

// T_xx + T_zz - T_z0 + T_0z for a two-qubit tensor.
double motivating_witness(const ExtendedCorrelationTensor& t);

}  // namespace wk
