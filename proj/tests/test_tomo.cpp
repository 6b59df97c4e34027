#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "witnesskit/densop.hpp"
#include "witnesskit/states.hpp"
#include "witnesskit/tomo.hpp"

namespace {

using wk::ComplexMatrix;
using wk::cplx;

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        s = std::max(s, std::abs(a.data[i] - b.data[i]));
    }
    return s;
}

double purity(const wk::DensityOperator& rho) {
    return wk::hs_inner(rho.matrix, rho.matrix);
}

}  // namespace

TEST_SUITE("tomo") {
    TEST_CASE("basis members are orthogonal, traceless beyond index 0 and Hermitian") {
        for (std::size_t d : {2, 3, 4, 5}) {
            CAPTURE(d);
            const wk::TomographicBasis basis = wk::gellmann_basis(d);
            REQUIRE(basis.ops.size() == d * d);
            CHECK(basis.d == d);
            CHECK(max_abs_diff(basis.ops[0], ComplexMatrix::identity(d)) == 0.0);
            for (std::size_t i = 0; i < d * d; ++i) {
                CHECK(wk::is_hermitian(basis.ops[i], 1e-14));
                if (i > 0) {
                    CHECK(std::abs(wk::trace(basis.ops[i])) < 1e-14);
                }
                for (std::size_t j = 0; j < d * d; ++j) {
                    const double want =
                        (i != j) ? 0.0 : (i == 0 ? static_cast<double>(d) : 2.0);
                    CHECK(wk::hs_inner(basis.ops[i], basis.ops[j]) ==
                          doctest::Approx(want).epsilon(1e-12));
                }
            }
        }
        CHECK_THROWS_AS(wk::gellmann_basis(1), std::invalid_argument);
    }

    TEST_CASE("qubit basis equals the Pauli matrices elementwise") {
        const wk::TomographicBasis p = wk::pauli_basis();
        const wk::TomographicBasis g = wk::gellmann_basis(2);
        REQUIRE(p.ops.size() == 4);
        REQUIRE(g.ops.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(max_abs_diff(p.ops[i], g.ops[i]) == 0.0);
        }
        CHECK(p.ops[1].at(0, 1) == cplx(1.0, 0.0));
        CHECK(p.ops[2].at(0, 1) == cplx(0.0, -1.0));
        CHECK(p.ops[3].at(0, 0) == cplx(1.0, 0.0));
        CHECK(p.ops[3].at(1, 1) == cplx(-1.0, 0.0));
    }

    TEST_CASE("index arithmetic is row-major over parties") {
        const auto rho = wk::random_state({2, 3}, 17);
        const auto t = wk::state_to_tensor(rho);
        REQUIRE(t.radices() == std::vector<std::size_t>{4, 9});
        REQUIRE(t.values.size() == 36);
        CHECK(t.index_of({0, 0}) == 0);
        CHECK(t.index_of({0, 8}) == 8);
        CHECK(t.index_of({1, 0}) == 9);
        CHECK(t.index_of({3, 8}) == 35);
        CHECK_THROWS_AS(t.index_of({4, 0}), std::out_of_range);
        CHECK_THROWS_AS(t.index_of({0}), std::invalid_argument);
    }

    TEST_CASE("moments of the singlet-like maximally entangled pair") {
        // phi+ has T_xx = 1, T_yy = -1, T_zz = 1 and no local terms
        ComplexMatrix m(4, 4);
        m.at(0, 0) = m.at(0, 3) = m.at(3, 0) = m.at(3, 3) = 0.5;
        const auto t = wk::state_to_tensor(wk::make_density(std::move(m), {2, 2}));
        CHECK(t.at({0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(t.at({1, 1}) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.at({2, 2}) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(t.at({3, 3}) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK(std::abs(t.at({i, 0})) < 1e-14);
            CHECK(std::abs(t.at({0, i})) < 1e-14);
        }
        CHECK(std::abs(t.at({1, 2})) < 1e-14);
    }

    TEST_CASE("mixing weight scales every genuine correlation linearly") {
        const double p = 0.37;
        const auto t = wk::state_to_tensor(wk::werner(p));
        CHECK(t.at({1, 1}) == doctest::Approx(p).epsilon(1e-12));
        CHECK(t.at({2, 2}) == doctest::Approx(-p).epsilon(1e-12));
        CHECK(t.at({3, 3}) == doctest::Approx(p).epsilon(1e-12));
        CHECK(std::abs(t.at({1, 3})) < 1e-14);
        CHECK(std::abs(t.at({3, 0})) < 1e-14);
    }

    TEST_CASE("round trip through moments reproduces the state") {
        const std::vector<std::vector<std::size_t>> shapes = {{2}, {3}, {2, 2}, {2, 3}, {3, 3},
                                                              {2, 2, 2}};
        std::uint64_t seed = 400;
        for (const auto& dims : shapes) {
            for (int rep = 0; rep < 10; ++rep) {
                const auto rho = wk::random_state(dims, seed++);
                const auto back = wk::tensor_to_state(wk::state_to_tensor(rho));
                CHECK(back.dims == dims);
                CHECK(max_abs_diff(back.matrix, rho.matrix) < 1e-10);
            }
        }
    }

    TEST_CASE("scaled round trip also reproduces the state") {
        const auto rho = wk::random_state({3, 3}, 501);
        const auto back =
            wk::tensor_to_state(wk::state_to_tensor(rho, wk::Convention::QuditScaled));
        CHECK(max_abs_diff(back.matrix, rho.matrix) < 1e-10);
    }

    TEST_CASE("moment weights recover the purity") {
        // sum over tuples of T^2 / prod(norms) equals Tr(rho^2), with norm d
        // for index 0 and norm 2 otherwise
        for (const auto& dims :
             std::vector<std::vector<std::size_t>>{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}}) {
            const auto rho = wk::random_state(dims, 600 + dims.size());
            const auto t = wk::state_to_tensor(rho);
            const auto rad = t.radices();
            std::vector<std::size_t> mu(dims.size(), 0);
            double acc = 0.0;
            for (std::size_t flat = 0; flat < t.values.size(); ++flat) {
                double norm = 1.0;
                for (std::size_t k = 0; k < dims.size(); ++k) {
                    norm *= (mu[k] == 0) ? static_cast<double>(dims[k]) : 2.0;
                }
                acc += t.values[flat] * t.values[flat] / norm;
                for (std::size_t k = dims.size(); k-- > 0;) {
                    if (++mu[k] < rad[k]) {
                        break;
                    }
                    mu[k] = 0;
                }
            }
            CHECK(acc == doctest::Approx(purity(rho)).epsilon(1e-10));
        }
    }

    TEST_CASE("scaled convention multiplies genuine correlations by d over 2(d-1)") {
        const auto rho = wk::random_state({3, 3}, 88);
        const auto raw = wk::state_to_tensor(rho);
        const auto sc = wk::state_to_tensor(rho, wk::Convention::QuditScaled);
        const double f = 3.0 / 4.0;
        for (std::size_t i = 0; i < 9; ++i) {
            for (std::size_t j = 0; j < 9; ++j) {
                const double want =
                    (i >= 1 && j >= 1) ? f * raw.at({i, j}) : raw.at({i, j});
                CHECK(sc.at({i, j}) == doctest::Approx(want).epsilon(1e-12));
            }
        }
        // qubits: the factor collapses to 1
        const auto rho2 = wk::random_state({2, 2}, 89);
        const auto raw2 = wk::state_to_tensor(rho2);
        const auto sc2 = wk::state_to_tensor(rho2, wk::Convention::QuditScaled);
        for (std::size_t k = 0; k < raw2.values.size(); ++k) {
            CHECK(sc2.values[k] == doctest::Approx(raw2.values[k]).epsilon(1e-14));
        }
        // not defined away from two equal-dimension parties
        CHECK_THROWS_AS(
            wk::state_to_tensor(wk::random_state({2, 3}, 90), wk::Convention::QuditScaled),
            std::invalid_argument);
        CHECK_THROWS_AS(
            wk::state_to_tensor(wk::random_state({2, 2, 2}, 91), wk::Convention::QuditScaled),
            std::invalid_argument);
    }

    TEST_CASE("to_raw and to_scaled invert each other") {
        const auto rho = wk::random_state({3, 3}, 92);
        const auto raw = wk::state_to_tensor(rho);
        const auto sc = wk::to_scaled(raw);
        CHECK(sc.convention == wk::Convention::QuditScaled);
        const auto back = wk::to_raw(sc);
        CHECK(back.convention == wk::Convention::RawMoment);
        for (std::size_t k = 0; k < raw.values.size(); ++k) {
            CHECK(back.values[k] == doctest::Approx(raw.values[k]).epsilon(1e-13));
        }
        // already-raw input passes through unchanged
        const auto same = wk::to_raw(raw);
        CHECK(same.values == raw.values);
    }

    TEST_CASE("two-qutrit family with one tunable weight has the known scaled moments") {
        for (double a : {0.1, 0.3, 0.5, 0.8}) {
            CAPTURE(a);
            const auto t =
                wk::state_to_tensor(wk::horodecki_3x3(a), wk::Convention::QuditScaled);
            const double pair = 3.0 * a / (2.0 + 16.0 * a);
            for (std::size_t j : {1, 2, 3}) {
                CHECK(t.at({j, j}) == doctest::Approx(pair).epsilon(1e-12));
            }
            for (std::size_t j : {4, 5, 6}) {
                CHECK(t.at({j, j}) == doctest::Approx(-pair).epsilon(1e-12));
            }
            CHECK(t.at({8, 2}) ==
                  doctest::Approx(-std::sqrt(3.0 * (1.0 - a * a)) / (2.0 + 16.0 * a))
                      .epsilon(1e-12));
            CHECK(t.at({8, 7}) ==
                  doctest::Approx(-std::sqrt(3.0) * (1.0 - a) / (4.0 + 32.0 * a))
                      .epsilon(1e-12));
            CHECK(t.at({8, 8}) ==
                  doctest::Approx((1.0 - a) / (4.0 + 32.0 * a)).epsilon(1e-12));
            // genuine-correlation square sum has a rational closed form
            CHECK(wk::sum_of_squares(t) ==
                  doctest::Approx((26.0 * a * a - a + 2.0) /
                                  (2.0 * (1.0 + 8.0 * a) * (1.0 + 8.0 * a)))
                      .epsilon(1e-12));
        }
    }

    TEST_CASE("operator moments pair with coefficient contraction through basis norms") {
        const auto rho = wk::random_state({2, 3}, 93);
        // rebuilding from coefficients T_mu / prod(norms) returns the operator
        auto c = wk::operator_to_tensor(rho.matrix, rho.dims);
        const auto rad = c.radices();
        std::vector<std::size_t> mu(2, 0);
        for (std::size_t flat = 0; flat < c.values.size(); ++flat) {
            double norm = 1.0;
            for (std::size_t k = 0; k < 2; ++k) {
                norm *= (mu[k] == 0) ? static_cast<double>(rho.dims[k]) : 2.0;
            }
            c.values[flat] /= norm;
            for (std::size_t k = 2; k-- > 0;) {
                if (++mu[k] < rad[k]) {
                    break;
                }
                mu[k] = 0;
            }
        }
        const ComplexMatrix rebuilt = wk::tensor_contraction_operator(c);
        CHECK(max_abs_diff(rebuilt, rho.matrix) < 1e-12);
    }

    TEST_CASE("coefficient contraction refuses scaled input") {
        auto t = wk::state_to_tensor(wk::random_state({3, 3}, 94), wk::Convention::QuditScaled);
        CHECK_THROWS_AS(wk::tensor_contraction_operator(t), std::invalid_argument);
    }

    TEST_CASE("operator moments accept traceless and non-Hermitian-free input") {
        ComplexMatrix k(4, 4);  // sigma_z (x) sigma_z
        k.at(0, 0) = 1.0;
        k.at(1, 1) = -1.0;
        k.at(2, 2) = -1.0;
        k.at(3, 3) = 1.0;
        const auto t = wk::operator_to_tensor(k, {2, 2});
        CHECK(t.at({3, 3}) == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(t.at({0, 0}) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK_THROWS_AS(wk::operator_to_tensor(k, {2, 3}), std::invalid_argument);
    }

    TEST_CASE("genuine-correlation square sum uses only all-nonzero tuples") {
        const auto t = wk::state_to_tensor(wk::werner(0.6));
        // 3 p^2 from the three diagonal slots; local terms excluded
        CHECK(wk::sum_of_squares(t) == doctest::Approx(3 * 0.36).epsilon(1e-12));
        // a filter that keeps everything picks up the all-identity slot too
        const double everything =
            wk::sum_of_squares(t, [](const std::vector<std::size_t>&) { return true; });
        CHECK(everything == doctest::Approx(1.0 + 3 * 0.36).epsilon(1e-12));
        const double none =
            wk::sum_of_squares(t, [](const std::vector<std::size_t>&) { return false; });
        CHECK(none == 0.0);
    }

    TEST_CASE("CSV output has a header and one row per index tuple") {
        wk::ExtendedCorrelationTensor t;
        t.dims = {2, 2};
        t.values.assign(16, 0.0);
        t.at({0, 0}) = 1.0;
        t.at({1, 1}) = 0.5;
        t.at({3, 3}) = 0.1;  // prints all 17 significant digits
        const std::string csv = wk::tensor_to_csv(t);
        std::istringstream in(csv);
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line == "mu_1,mu_2,value");
        std::vector<std::string> rows;
        while (std::getline(in, line)) {
            rows.push_back(line);
        }
        REQUIRE(rows.size() == 16);
        CHECK(rows[0] == "0,0,1");
        CHECK(rows[5] == "1,1,0.5");
        CHECK(rows[6] == "1,2,0");
        CHECK(rows[15] == "3,3,0.10000000000000001");
        // a state-derived table has the same shape
        const std::string csv2 = wk::tensor_to_csv(wk::state_to_tensor(wk::werner(0.5)));
        CHECK(std::count(csv2.begin(), csv2.end(), '\n') == 17);
    }
}
