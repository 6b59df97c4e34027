#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "witnesskit/densop.hpp"

namespace wk {

// Two-qubit Bell mixtures. Bell basis order: psi_1 = phi+, psi_2 = phi-,
// psi_3 = psi+, psi_4 = psi-.
DensityOperator werner(double p);                               // p phi+ + (1-p)/4 I
DensityOperator bell_diagonal(double p1, double p2, double p3, double p4);
DensityOperator colored_noise(double p);                        // p phi+ + (1-p)|01><01|

// d x d families
DensityOperator isotropic(std::size_t d, double p);             // p psi_d+ + (1-p)/d^2 I
DensityOperator horodecki_3x3(double a);                        // two-qutrit PPT family

// three qubits
DensityOperator w_state();                                      // (|100>+|010>+|001>)/sqrt(3)

// Seeded generators for property tests: Ginibre mixed state, per-party pure
// product state, and a convex mixture of random product states (separable by
// construction).
DensityOperator random_state(const std::vector<std::size_t>& dims, std::uint64_t seed);
DensityOperator random_product_state(const std::vector<std::size_t>& dims, std::uint64_t seed);
DensityOperator random_separable_state(const std::vector<std::size_t>& dims, std::uint64_t seed,
                                       std::size_t terms = 4);

// Parsed "family:werner?p=0.5" reference (the "family:" prefix is optional;
// parameters separated by '&'). Tags: werner, belldiag, isotropic, horodecki,
// colored, wstate.
struct FamilySpec {
    std::string family;
    std::map<std::string, double> params;
};

FamilySpec parse_family(const std::string& text);
DensityOperator make_family_state(const FamilySpec& spec);

}  // namespace wk
