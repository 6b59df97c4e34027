#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "witnesskit/densop.hpp"

namespace {

using wk::ComplexMatrix;
using wk::cplx;

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (auto& z : m.data) {
        z = cplx(g(rng), g(rng));
    }
    return m;
}

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    const ComplexMatrix g = random_matrix(n, seed);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            h.at(i, j) = 0.5 * (g.at(i, j) + std::conj(g.at(j, i)));
        }
    }
    return h;
}

wk::DensityOperator random_density(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    std::size_t n = 1;
    for (std::size_t d : dims) {
        n *= d;
    }
    const ComplexMatrix g = random_matrix(n, seed);
    ComplexMatrix m = wk::matmul(g, wk::adjoint(g));
    const cplx tr = wk::trace(m);
    m = (1.0 / tr.real()) * m;
    // exact symmetrization so validation gates pass at machine precision
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx v = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            m.at(i, j) = v;
            m.at(j, i) = std::conj(v);
        }
    }
    return wk::make_density(std::move(m), dims);
}

ComplexMatrix bell_phi_plus() {
    ComplexMatrix m(4, 4);
    m.at(0, 0) = m.at(0, 3) = m.at(3, 0) = m.at(3, 3) = 0.5;
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        s = std::max(s, std::abs(a.data[i] - b.data[i]));
    }
    return s;
}

}  // namespace

TEST_SUITE("densop") {
    TEST_CASE("matmul, adjoint and trace match naive loops") {
        const ComplexMatrix a = random_matrix(5, 21);
        const ComplexMatrix b = random_matrix(5, 22);
        const ComplexMatrix c = wk::matmul(a, b);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                cplx want = 0.0;
                for (std::size_t k = 0; k < 5; ++k) {
                    want += a.at(i, k) * b.at(k, j);
                }
                CHECK(std::abs(c.at(i, j) - want) < 1e-12);
            }
        }
        const ComplexMatrix ad = wk::adjoint(a);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                CHECK(ad.at(i, j) == std::conj(a.at(j, i)));
            }
        }
        cplx tr = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            tr += a.at(i, i);
        }
        CHECK(std::abs(wk::trace(a) - tr) < 1e-14);
    }

    TEST_CASE("matvec matches matmul against a column") {
        const ComplexMatrix a = random_matrix(6, 31);
        std::vector<cplx> x(6);
        for (std::size_t i = 0; i < 6; ++i) {
            x[i] = cplx(0.1 * static_cast<double>(i), -0.2 * static_cast<double>(i));
        }
        const auto y = wk::matvec(a, x);
        for (std::size_t i = 0; i < 6; ++i) {
            cplx want = 0.0;
            for (std::size_t j = 0; j < 6; ++j) {
                want += a.at(i, j) * x[j];
            }
            CHECK(std::abs(y[i] - want) < 1e-12);
        }
    }

    TEST_CASE("hs_inner is the trace of the product for Hermitian inputs") {
        const ComplexMatrix a = random_hermitian(4, 41);
        const ComplexMatrix b = random_hermitian(4, 42);
        const cplx tr = wk::trace(wk::matmul(a, b));
        CHECK(tr.imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(wk::hs_inner(a, b) == doctest::Approx(tr.real()).epsilon(1e-12));
        CHECK_THROWS_AS(wk::hs_inner(a, random_hermitian(5, 43)), std::invalid_argument);
    }

    TEST_CASE("tensor_product places party 0 in the most significant block") {
        ComplexMatrix a(2, 2);
        a.at(0, 0) = 1.0;
        a.at(0, 1) = 2.0;
        a.at(1, 0) = 3.0;
        a.at(1, 1) = 4.0;
        ComplexMatrix b(2, 2);
        b.at(0, 0) = cplx(0.0, 1.0);
        b.at(1, 1) = 5.0;
        const ComplexMatrix t = wk::tensor_product(a, b);
        CHECK(t.rows == 4);
        CHECK(t.at(0, 0) == cplx(0.0, 1.0));
        CHECK(t.at(1, 1) == cplx(5.0, 0.0));
        CHECK(t.at(0, 2) == cplx(0.0, 2.0));
        CHECK(t.at(3, 3) == cplx(20.0, 0.0));
        CHECK(t.at(2, 0) == cplx(0.0, 3.0));
    }

    TEST_CASE("make_density rejects bad inputs") {
        ComplexMatrix ok = bell_phi_plus();
        CHECK_NOTHROW(wk::make_density(ok, {2, 2}));
        CHECK_THROWS_AS(wk::make_density(ok, {2, 3}), std::invalid_argument);
        CHECK_THROWS_AS(wk::make_density(ok, {4, 2}), std::invalid_argument);

        ComplexMatrix skew = bell_phi_plus();
        skew.at(0, 3) = 0.7;  // breaks Hermiticity
        CHECK_THROWS_AS(wk::make_density(skew, {2, 2}), std::invalid_argument);

        ComplexMatrix heavy = bell_phi_plus();
        heavy.at(1, 1) = 0.5;  // trace 1.5
        CHECK_THROWS_AS(wk::make_density(heavy, {2, 2}), std::invalid_argument);

        ComplexMatrix neg(2, 2);
        neg.at(0, 0) = 1.5;
        neg.at(1, 1) = -0.5;
        CHECK_THROWS_AS(wk::make_density(neg, {2}, true), std::invalid_argument);
        CHECK_NOTHROW(wk::make_density(neg, {2}, false));
    }

    TEST_CASE("partial transpose of the maximally entangled state has one negative eigenvalue") {
        const auto rho = wk::make_density(bell_phi_plus(), {2, 2});
        const ComplexMatrix pt = wk::partial_transpose(rho, 1);
        const wk::Spectrum sp = wk::hermitian_eig(pt);
        REQUIRE(sp.eigenvalues.size() == 4);
        CHECK(sp.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(sp.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(sp.eigenvalues[2] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(sp.eigenvalues[3] == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK_FALSE(wk::is_psd(pt));
    }

    TEST_CASE("partial transpose is an involution that preserves trace and Hermiticity") {
        const std::vector<std::vector<std::size_t>> shapes = {{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}};
        std::uint64_t seed = 900;
        for (const auto& dims : shapes) {
            for (int rep = 0; rep < 50; ++rep) {
                const auto rho = random_density(dims, seed++);
                for (std::size_t party = 0; party < dims.size(); ++party) {
                    const ComplexMatrix pt = wk::partial_transpose(rho, party);
                    CHECK(std::abs(wk::trace(pt) - cplx(1.0, 0.0)) < 1e-12);
                    CHECK(wk::is_hermitian(pt, 1e-12));
                    const ComplexMatrix back = wk::partial_transpose(pt, rho.dims, party);
                    CHECK(max_abs_diff(back, rho.matrix) == 0.0);
                }
            }
        }
    }

    TEST_CASE("transposing every party equals the full transpose") {
        const auto rho = random_density({2, 3}, 77);
        const ComplexMatrix both =
            wk::partial_transpose(wk::partial_transpose(rho, 0), rho.dims, 1);
        ComplexMatrix full(6, 6);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                full.at(i, j) = rho.matrix.at(j, i);
            }
        }
        CHECK(max_abs_diff(both, full) == 0.0);
    }

    TEST_CASE("partial transpose validates party and dims") {
        const auto rho = random_density({2, 2}, 5);
        CHECK_THROWS_AS(wk::partial_transpose(rho, 2), std::out_of_range);
        CHECK_THROWS_AS(wk::partial_transpose(rho.matrix, {2, 3}, 0), std::invalid_argument);
    }

    TEST_CASE("partial trace reproduces marginals of product states") {
        const auto a = random_density({2}, 61);
        const auto b = random_density({3}, 62);
        const auto joint =
            wk::make_density(wk::tensor_product(a.matrix, b.matrix), {2, 3});
        CHECK(max_abs_diff(wk::partial_trace(joint, {0}).matrix, a.matrix) < 1e-12);
        CHECK(max_abs_diff(wk::partial_trace(joint, {1}).matrix, b.matrix) < 1e-12);
        // keep is a set: order and duplicates-free, full keep is the identity
        CHECK(max_abs_diff(wk::partial_trace(joint, {1, 0}).matrix, joint.matrix) == 0.0);
    }

    TEST_CASE("partial trace validates keep") {
        const auto rho = random_density({2, 2}, 8);
        CHECK_THROWS_AS(wk::partial_trace(rho, {}), std::invalid_argument);
        CHECK_THROWS_AS(wk::partial_trace(rho, {0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(wk::partial_trace(rho, {2}), std::out_of_range);
    }

    TEST_CASE("three-party example: one-excitation state has marginal diag(2/3,1/3)") {
        ComplexMatrix m(8, 8);
        const std::size_t idx[3] = {4, 2, 1};
        for (std::size_t a : idx) {
            for (std::size_t b : idx) {
                m.at(a, b) = 1.0 / 3.0;
            }
        }
        const auto rho = wk::make_density(std::move(m), {2, 2, 2});
        for (std::size_t party = 0; party < 3; ++party) {
            const auto marg = wk::partial_trace(rho, {party});
            CHECK(marg.matrix.at(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
            CHECK(marg.matrix.at(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
            CHECK(std::abs(marg.matrix.at(0, 1)) < 1e-12);
        }
    }

    TEST_CASE("eigendecomposition reconstructs the input") {
        for (std::size_t n : {2, 3, 5, 9, 16}) {
            const ComplexMatrix h = random_hermitian(n, 300 + n);
            const wk::Spectrum sp = wk::hermitian_eig(h);
            REQUIRE(sp.eigenvalues.size() == n);
            // descending order
            for (std::size_t k = 1; k < n; ++k) {
                CHECK(sp.eigenvalues[k - 1] >= sp.eigenvalues[k]);
            }
            // V diag(w) V^dagger == h
            ComplexMatrix rec(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    cplx s = 0.0;
                    for (std::size_t k = 0; k < n; ++k) {
                        s += sp.eigenvectors.at(i, k) * sp.eigenvalues[k] *
                             std::conj(sp.eigenvectors.at(j, k));
                    }
                    rec.at(i, j) = s;
                }
            }
            CHECK(max_abs_diff(rec, h) < 1e-9);
            // orthonormal columns
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    cplx s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        s += std::conj(sp.eigenvectors.at(i, a)) * sp.eigenvectors.at(i, b);
                    }
                    CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-10);
                }
            }
        }
    }

    TEST_CASE("eigendecomposition handles known 2x2 oracles") {
        ComplexMatrix sx(2, 2);
        sx.at(0, 1) = 1.0;
        sx.at(1, 0) = 1.0;
        const wk::Spectrum sp = wk::hermitian_eig(sx);
        CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sp.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
        // phase fix: first component real positive
        CHECK(sp.eigenvectors.at(0, 0).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK(sp.eigenvectors.at(0, 0).imag() == doctest::Approx(0.0).epsilon(1e-14));

        ComplexMatrix sy(2, 2);
        sy.at(0, 1) = cplx(0.0, -1.0);
        sy.at(1, 0) = cplx(0.0, 1.0);
        const wk::Spectrum spy = wk::hermitian_eig(sy);
        CHECK(spy.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(spy.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
    }

    TEST_CASE("eigendecomposition of a degenerate diagonal matrix is the identity basis") {
        ComplexMatrix d(3, 3);
        d.at(0, 0) = 2.0;
        d.at(1, 1) = 2.0;
        d.at(2, 2) = 1.0;
        const wk::Spectrum sp = wk::hermitian_eig(d);
        CHECK(sp.eigenvalues[0] == 2.0);
        CHECK(sp.eigenvalues[1] == 2.0);
        CHECK(sp.eigenvalues[2] == 1.0);
        // ties resolve by lexicographic column order, so (0,1,0) precedes (1,0,0)
        CHECK(std::abs(sp.eigenvectors.at(1, 0) - cplx(1.0, 0.0)) < 1e-12);
        CHECK(std::abs(sp.eigenvectors.at(0, 1) - cplx(1.0, 0.0)) < 1e-12);
        CHECK(std::abs(sp.eigenvectors.at(2, 2) - cplx(1.0, 0.0)) < 1e-12);
        // identical inputs give identical output, bit for bit
        const wk::Spectrum again = wk::hermitian_eig(d);
        CHECK(again.eigenvalues == sp.eigenvalues);
        CHECK(max_abs_diff(again.eigenvectors, sp.eigenvectors) == 0.0);
    }

    TEST_CASE("hermitian_eig rejects non-Hermitian input") {
        ComplexMatrix m(2, 2);
        m.at(0, 1) = 1.0;  // strictly upper, not Hermitian
        CHECK_THROWS_AS(wk::hermitian_eig(m), std::invalid_argument);
    }

    TEST_CASE("is_psd respects the floor") {
        ComplexMatrix m(2, 2);
        m.at(0, 0) = 1.0;
        m.at(1, 1) = -1e-12;
        CHECK(wk::is_psd(m));  // inside the default tolerance floor
        m.at(1, 1) = -1e-6;
        CHECK_FALSE(wk::is_psd(m));
        CHECK(wk::is_psd(m, -1e-3));
    }

    TEST_CASE("JSON round trip preserves every entry") {
        const auto rho = random_density({2, 3}, 71);
        const std::string text = wk::density_to_json(rho);
        const auto back = wk::density_from_json(text);
        CHECK(back.dims == rho.dims);
        CHECK(max_abs_diff(back.matrix, rho.matrix) < 1e-15);
        // pretty output parses to the same state
        const auto back2 = wk::density_from_json(wk::density_to_json(rho, true));
        CHECK(max_abs_diff(back2.matrix, rho.matrix) < 1e-15);
    }

    TEST_CASE("JSON parsing rejects malformed input") {
        CHECK_THROWS_AS(wk::density_from_json("not json"), std::invalid_argument);
        CHECK_THROWS_AS(wk::density_from_json("{}"), std::invalid_argument);
        CHECK_THROWS_AS(wk::density_from_json(R"({"dims":[2],"re":[[1,0],[0,0]]})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            wk::density_from_json(R"({"dims":[2],"re":[[1,0]],"im":[[0,0],[0,0]]})"),
            std::invalid_argument);
        CHECK_THROWS_AS(
            wk::density_from_json(R"({"dims":[2],"re":[[1,"x"],[0,0]],"im":[[0,0],[0,0]]})"),
            std::invalid_argument);
    }
}
