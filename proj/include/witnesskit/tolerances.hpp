#pragma once

namespace wk {

// Central numeric tolerance record. Every module reads these instead of
// hardcoding its own epsilons, so tests and the CLI agree on one source
// of truth. Override via the WITNESSKIT_TOL environment variable: either
// a bare number (sets detection_margin) or "name=value,name=value".
struct Tolerances {
    double hermiticity = 1e-8;         // gate for eigensolver input
    double density_hermiticity = 1e-10;  // stricter gate for density operators
    double entry_hermiticity = 1e-12;
    double trace_one = 1e-10;
    double psd_floor = -1e-9;        // eigenvalue floor absorbing roundoff
    double basis_pair = 1e-12;       // Tr(l_i l_j) = 2 delta_ij check
    double reconstruct = 1e-9;       // eigendecomposition round trip, Frobenius
    double orthonormal = 1e-10;
    double zero_weight = 1e-12;      // D components below this are dropped
    double seesaw_improve = 1e-11;   // per-sweep convergence threshold
    double detection_margin = 1e-9;  // strict-inequality margin for verdicts
    double local_average = 1e-9;     // Bell-diagonal precondition gate
};

// Process-wide record, initialized from WITNESSKIT_TOL on first use.
const Tolerances& tol();

// Re-reads the environment; primarily for tests that set the variable.
void reload_tolerances();

// Parses an override string into an existing record. Throws
// std::invalid_argument on malformed input or unknown names.
void apply_tolerance_overrides(Tolerances& t, const char* text);

}  // namespace wk
