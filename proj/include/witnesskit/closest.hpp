#pragma once

#include "witnesskit/densop.hpp"
#include "witnesskit/states.hpp"

namespace wk {

struct PptProjectionResult {
    ComplexMatrix rho0;        // candidate closest PPT state
    double lambda = 0.0;       // final trace-restoring shift
    bool is_psd = false;       // explicit eigenvalue check on rho0
    double hs_distance = 0.0;  // Hilbert-Schmidt norm of rho - rho0
    int iterations = 0;        // clip-and-shift rounds; 1 means the one-shot step sufficed
};

// Eigenvalue clipping on the partial transpose: clip negatives, shift the
// rest to restore unit trace, re-clip if the shift drove a kept eigenvalue
// negative (exact simplex projection of the spectrum at the fixed point),
// undo the transpose. Always returns; a non-PSD rho0 is reported via the
// flag, not an error.
PptProjectionResult closest_ppt(const DensityOperator& rho, std::size_t party);

// Closed-form reference states for the supported families.
//   werner?p=..          p <= 1/3: the state itself; above: the fixed p = 1/3 state
//   isotropic?d=..&p=..  p <= 1/(d+1): itself; above: same form at p = 1/(d+1)
//   belldiag?p1=..&p2=..&p3=..&p4=..[&j=1..4]
//                        rho - (2/3) p_j (psi_j - 1/4 I) for the selected Bell
//                        projector; default j is the dominant one, and a state
//                        with max p_j <= 1/2 (separable) returns itself unless
//                        j is given explicitly
//   wstate               (23/63)|W><W| + (40/63) I/8
// Throws std::invalid_argument for other tags or out-of-domain parameters.
DensityOperator closest_separable_family(const FamilySpec& spec);

// sqrt(Tr((a-b)^2)); throws on dimension mismatch.
double hs_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace wk
