#include "witnesskit/closest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "witnesskit/tolerances.hpp"

namespace wk {

namespace {

ComplexMatrix bell_projector(int which) {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<cplx> v(4, 0.0);
    switch (which) {
        case 1: v = {s, 0, 0, s}; break;
        case 2: v = {s, 0, 0, -s}; break;
        case 3: v = {0, s, s, 0}; break;
        case 4: v = {0, s, -s, 0}; break;
        default: throw std::invalid_argument("bell index must be 1..4");
    }
    ComplexMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            m.at(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

double family_param(const FamilySpec& spec, const std::string& name) {
    auto it = spec.params.find(name);
    if (it == spec.params.end()) {
        throw std::invalid_argument("closest_separable_family: missing parameter " + name);
    }
    return it->second;
}

}  // namespace

PptProjectionResult closest_ppt(const DensityOperator& rho, std::size_t party) {
    const ComplexMatrix pt = partial_transpose(rho, party);
    const Spectrum spec = hermitian_eig(pt);
    const std::size_t n = spec.eigenvalues.size();

    std::vector<bool> kept(n);
    for (std::size_t i = 0; i < n; ++i) {
        kept[i] = spec.eigenvalues[i] >= 0.0;
    }
    double lambda = 0.0;
    int iterations = 0;
    for (;;) {
        ++iterations;
        double kept_sum = 0.0;
        std::size_t kept_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (kept[i]) {
                kept_sum += spec.eigenvalues[i];
                ++kept_count;
            }
        }
        if (kept_count == 0) {
            throw std::runtime_error("closest_ppt: empty spectrum after clipping");
        }
        lambda = (1.0 - kept_sum) / static_cast<double>(kept_count);
        bool stable = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (kept[i] && spec.eigenvalues[i] + lambda < 0.0) {
                kept[i] = false;
                stable = false;
            }
        }
        if (stable) {
            break;
        }
    }

    // rho0^PT = V D' V^dag, assembled column by column
    ComplexMatrix shifted(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!kept[k]) {
            continue;
        }
        const double dk = spec.eigenvalues[k] + lambda;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = spec.eigenvectors.at(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                shifted.at(i, j) += dk * vik * std::conj(spec.eigenvectors.at(j, k));
            }
        }
    }

    PptProjectionResult out;
    out.rho0 = partial_transpose(shifted, rho.dims, party);
    out.lambda = lambda;
    out.iterations = iterations;
    out.is_psd = is_psd(out.rho0);
    out.hs_distance = frobenius(rho.matrix - out.rho0);
    return out;
}

DensityOperator closest_separable_family(const FamilySpec& spec) {
    const std::string& f = spec.family;
    if (f == "werner") {
        const double p = family_param(spec, "p");
        return werner(std::min(p, 1.0 / 3.0));
    }
    if (f == "isotropic") {
        const double d = family_param(spec, "d");
        if (d < 2.0 || d != std::floor(d)) {
            throw std::invalid_argument("closest_separable_family: isotropic d must be an integer >= 2");
        }
        const double p = family_param(spec, "p");
        const double cap = 1.0 / (d + 1.0);
        return isotropic(static_cast<std::size_t>(d), std::min(p, cap));
    }
    if (f == "wstate" || f == "w") {
        const DensityOperator w = w_state();
        ComplexMatrix m(8, 8);
        const double a = 23.0 / 63.0;
        const double b = 40.0 / 63.0 / 8.0;
        for (std::size_t e = 0; e < m.data.size(); ++e) {
            m.data[e] = a * w.matrix.data[e];
        }
        for (std::size_t i = 0; i < 8; ++i) {
            m.at(i, i) += b;
        }
        return make_density(std::move(m), {2, 2, 2});
    }
    if (f == "belldiag" || f == "bell_diagonal") {
        const double ps[4] = {family_param(spec, "p1"), family_param(spec, "p2"),
                              family_param(spec, "p3"), family_param(spec, "p4")};
        int j = 0;
        const auto jt = spec.params.find("j");
        if (jt != spec.params.end()) {
            if (jt->second < 1.0 || jt->second > 4.0 || jt->second != std::floor(jt->second)) {
                throw std::invalid_argument("closest_separable_family: belldiag j must be 1..4");
            }
            j = static_cast<int>(jt->second);
        } else {
            j = 1 + static_cast<int>(std::max_element(ps, ps + 4) - ps);
            if (ps[j - 1] <= 0.5) {
                // separable spectrum, nothing to subtract
                return bell_diagonal(ps[0], ps[1], ps[2], ps[3]);
            }
        }
        const DensityOperator bd = bell_diagonal(ps[0], ps[1], ps[2], ps[3]);
        const ComplexMatrix proj = bell_projector(j);
        ComplexMatrix m = bd.matrix;
        const double w = (2.0 / 3.0) * ps[j - 1];
        for (std::size_t e = 0; e < m.data.size(); ++e) {
            m.data[e] -= w * proj.data[e];
        }
        for (std::size_t i = 0; i < 4; ++i) {
            m.at(i, i) += w / 4.0;
        }
        return make_density(std::move(m), {2, 2});
    }
    throw std::invalid_argument("closest_separable_family: unsupported family '" + f + "'");
}

double hs_distance(const DensityOperator& a, const DensityOperator& b) {
    if (a.dims != b.dims) {
        throw std::invalid_argument("hs_distance: dimension mismatch");
    }
    return frobenius(a.matrix - b.matrix);
}

}  // namespace wk
