#pragma once

#include <functional>
#include <string>
#include <vector>

#include "witnesskit/densop.hpp"

namespace wk {

// Per-party operator basis: ops[0] is the identity, the rest are traceless
// Hermitian with Tr(ops[i] ops[j]) = 2 delta_ij, entries purely real or
// purely imaginary.
struct TomographicBasis {
    std::size_t d = 0;
    std::vector<ComplexMatrix> ops;  // d*d operators
};

TomographicBasis pauli_basis();

// Generalized Gell-Mann set, fixed ordering: symmetric pairs (j,k), j < k,
// row-major; then antisymmetric pairs in the same order; then diagonal
// members l = 1..d-1 with D_l ~ diag(1,..,1,-l,0,..). gellmann_basis(2)
// coincides with pauli_basis elementwise. Throws for d < 2.
TomographicBasis gellmann_basis(std::size_t d);

enum class Convention {
    RawMoment,    // plain traces Tr(rho sigma_mu1 (x) ... (x) sigma_muN)
    QuditScaled,  // bipartite equal dims: indices i,j >= 1 carry a d/(2(d-1)) factor
};

// The state in measurement coordinates: one real value per index tuple
// (mu_1..mu_N), mu_k in 0..d_k^2-1, stored row-major over parties.
struct ExtendedCorrelationTensor {
    std::vector<std::size_t> dims;
    std::vector<double> values;
    Convention convention = Convention::RawMoment;

    std::vector<std::size_t> radices() const;  // d_k^2 per party
    std::size_t index_of(const std::vector<std::size_t>& mu) const;
    double at(const std::vector<std::size_t>& mu) const;
    double& at(const std::vector<std::size_t>& mu);
};

// Full moment array of rho in the party-wise Pauli/Gell-Mann basis.
// QuditScaled requires exactly two parties of equal dimension.
ExtendedCorrelationTensor state_to_tensor(const DensityOperator& rho,
                                          Convention convention = Convention::RawMoment);

// Plain trace moments of an arbitrary operator against the same basis;
// RawMoment convention, no state validation.
ExtendedCorrelationTensor operator_to_tensor(const ComplexMatrix& m,
                                             const std::vector<std::size_t>& dims);

// sum over tuples of c_mu sigma_mu1 (x) .. (x) sigma_muN, with c read as
// plain coefficients (RawMoment only). Pairing with operator_to_tensor picks
// up the basis norms (d for index 0, 2 otherwise, per party), not a clean
// identity.
ComplexMatrix tensor_contraction_operator(const ExtendedCorrelationTensor& c);

// Inverse of state_to_tensor. QuditScaled inputs are converted to RawMoment
// internally. The result is Hermitian with unit trace but NOT necessarily
// PSD; callers needing a physical state validate separately.
DensityOperator tensor_to_state(const ExtendedCorrelationTensor& t);

ExtendedCorrelationTensor to_raw(const ExtendedCorrelationTensor& t);
ExtendedCorrelationTensor to_scaled(const ExtendedCorrelationTensor& t);

// Sum of squared values over selected index tuples. The default filter keeps
// tuples with every index >= 1 (genuine correlations only).
using IndexFilter = std::function<bool(const std::vector<std::size_t>&)>;
double sum_of_squares(const ExtendedCorrelationTensor& t);
double sum_of_squares(const ExtendedCorrelationTensor& t, const IndexFilter& filter);

// CSV with header mu_1,..,mu_N,value, one row per index tuple in row-major
// tuple order; floats printed with %.17g.
std::string tensor_to_csv(const ExtendedCorrelationTensor& t);

}  // namespace wk
