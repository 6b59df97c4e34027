#include "witnesskit/states.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace wk {

namespace {

void require_unit_range(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

ComplexMatrix outer(const std::vector<cplx>& v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            m.at(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

// Bell vectors in the |00>,|01>,|10>,|11> basis
std::vector<cplx> bell_vector(int which) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (which) {
        case 1: return {s, 0.0, 0.0, s};    // phi+
        case 2: return {s, 0.0, 0.0, -s};   // phi-
        case 3: return {0.0, s, s, 0.0};    // psi+
        default: return {0.0, s, -s, 0.0};  // psi-
    }
}

std::vector<cplx> random_unit_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(n);
    double norm_sq = 0.0;
    for (auto& z : v) {
        z = cplx(gauss(rng), gauss(rng));
        norm_sq += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& z : v) {
        z *= inv;
    }
    return v;
}

std::vector<cplx> kron_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i * b.size() + j] = a[i] * b[j];
        }
    }
    return r;
}

ComplexMatrix random_product_projector(const std::vector<std::size_t>& dims,
                                       std::mt19937_64& rng) {
    std::vector<cplx> v = random_unit_vector(dims[0], rng);
    for (std::size_t k = 1; k < dims.size(); ++k) {
        v = kron_vec(v, random_unit_vector(dims[k], rng));
    }
    return outer(v);
}

double get_param(const FamilySpec& spec, const std::string& name) {
    auto it = spec.params.find(name);
    if (it == spec.params.end()) {
        throw std::invalid_argument("family " + spec.family + ": missing parameter " + name);
    }
    return it->second;
}

}  // namespace

DensityOperator werner(double p) {
    require_unit_range(p, "werner p");
    ComplexMatrix m = outer(bell_vector(1));
    const double bg = (1.0 - p) / 4.0;
    for (auto& z : m.data) {
        z *= p;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        m.at(i, i) += bg;
    }
    return make_density(std::move(m), {2, 2});
}

DensityOperator bell_diagonal(double p1, double p2, double p3, double p4) {
    const double ps[4] = {p1, p2, p3, p4};
    double sum = 0.0;
    for (double p : ps) {
        if (p < 0.0) {
            throw std::invalid_argument("bell_diagonal: negative probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("bell_diagonal: probabilities must sum to 1");
    }
    ComplexMatrix m(4, 4);
    for (int j = 0; j < 4; ++j) {
        if (ps[j] == 0.0) {
            continue;
        }
        const ComplexMatrix proj = outer(bell_vector(j + 1));
        for (std::size_t e = 0; e < m.data.size(); ++e) {
            m.data[e] += ps[j] * proj.data[e];
        }
    }
    return make_density(std::move(m), {2, 2});
}

DensityOperator colored_noise(double p) {
    require_unit_range(p, "colored_noise p");
    ComplexMatrix m = outer(bell_vector(1));
    for (auto& z : m.data) {
        z *= p;
    }
    m.at(1, 1) += 1.0 - p;
    return make_density(std::move(m), {2, 2});
}

DensityOperator isotropic(std::size_t d, double p) {
    if (d < 2) {
        throw std::invalid_argument("isotropic: dimension must be >= 2");
    }
    require_unit_range(p, "isotropic p");
    const std::size_t side = d * d;
    ComplexMatrix m(side, side);
    const double bg = (1.0 - p) / static_cast<double>(side);
    for (std::size_t i = 0; i < side; ++i) {
        m.at(i, i) = bg;
    }
    const double pair = p / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            m.at(i * d + i, j * d + j) += pair;
        }
    }
    return make_density(std::move(m), {d, d});
}

DensityOperator horodecki_3x3(double a) {
    require_unit_range(a, "horodecki a");
    const double b = (1.0 + a) / 2.0;
    const double c = std::sqrt(1.0 - a * a) / 2.0;
    const double f = 1.0 / (8.0 * a + 1.0);
    ComplexMatrix m(9, 9);
    // diagonal: a everywhere except entries (6,6) and (8,8) which hold b
    for (std::size_t i = 0; i < 9; ++i) {
        m.at(i, i) = a;
    }
    m.at(6, 6) = b;
    m.at(8, 8) = b;
    // coherences of the embedded maximally entangled |00>+|11>+|22|
    const std::size_t diag_idx[3] = {0, 4, 8};
    for (std::size_t x : diag_idx) {
        for (std::size_t y : diag_idx) {
            if (x != y) {
                m.at(x, y) = a;
            }
        }
    }
    m.at(6, 8) = c;
    m.at(8, 6) = c;
    for (auto& z : m.data) {
        z *= f;
    }
    return make_density(std::move(m), {3, 3});
}

DensityOperator w_state() {
    std::vector<cplx> v(8, 0.0);
    const double s = 1.0 / std::sqrt(3.0);
    v[4] = s;  // |100>
    v[2] = s;  // |010>
    v[1] = s;  // |001>
    return make_density(outer(v), {2, 2, 2});
}

DensityOperator random_state(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    std::size_t side = 1;
    for (std::size_t d : dims) {
        side *= d;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(side, side);
    for (auto& z : g.data) {
        z = cplx(gauss(rng), gauss(rng));
    }
    ComplexMatrix m = matmul(g, adjoint(g));
    const double tr = trace(m).real();
    for (auto& z : m.data) {
        z /= tr;
    }
    // exact Hermitian symmetrization so the strict density gate passes
    for (std::size_t i = 0; i < side; ++i) {
        for (std::size_t j = i + 1; j < side; ++j) {
            const cplx avg = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            m.at(i, j) = avg;
            m.at(j, i) = std::conj(avg);
        }
        m.at(i, i) = m.at(i, i).real();
    }
    return make_density(std::move(m), dims, /*check_psd=*/false);
}

DensityOperator random_product_state(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return make_density(random_product_projector(dims, rng), dims, /*check_psd=*/false);
}

DensityOperator random_separable_state(const std::vector<std::size_t>& dims, std::uint64_t seed,
                                       std::size_t terms) {
    if (terms == 0) {
        throw std::invalid_argument("random_separable_state: need at least one term");
    }
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(terms);
    double sum = 0.0;
    for (auto& x : w) {
        x = expo(rng);
        sum += x;
    }
    std::size_t side = 1;
    for (std::size_t d : dims) {
        side *= d;
    }
    ComplexMatrix m(side, side);
    for (std::size_t k = 0; k < terms; ++k) {
        const ComplexMatrix proj = random_product_projector(dims, rng);
        const double wk = w[k] / sum;
        for (std::size_t e = 0; e < m.data.size(); ++e) {
            m.data[e] += wk * proj.data[e];
        }
    }
    return make_density(std::move(m), dims, /*check_psd=*/false);
}

FamilySpec parse_family(const std::string& text) {
    std::string s = text;
    if (s.rfind("family:", 0) == 0) {
        s = s.substr(7);
    }
    FamilySpec spec;
    const std::size_t qmark = s.find('?');
    spec.family = s.substr(0, qmark);
    if (spec.family.empty()) {
        throw std::invalid_argument("family spec: empty family tag");
    }
    if (qmark == std::string::npos) {
        return spec;
    }
    std::string rest = s.substr(qmark + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
        std::size_t amp = rest.find('&', start);
        const std::string item =
            rest.substr(start, amp == std::string::npos ? std::string::npos : amp - start);
        if (!item.empty()) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw std::invalid_argument("family spec: expected name=value in '" + item + "'");
            }
            std::size_t pos = 0;
            const std::string num = item.substr(eq + 1);
            double v = 0.0;
            try {
                v = std::stod(num, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("family spec: bad number '" + num + "'");
            }
            if (pos != num.size()) {
                throw std::invalid_argument("family spec: bad number '" + num + "'");
            }
            spec.params[item.substr(0, eq)] = v;
        }
        if (amp == std::string::npos) {
            break;
        }
        start = amp + 1;
    }
    return spec;
}

DensityOperator make_family_state(const FamilySpec& spec) {
    const std::string& f = spec.family;
    if (f == "werner") {
        return werner(get_param(spec, "p"));
    }
    if (f == "belldiag" || f == "bell_diagonal") {
        return bell_diagonal(get_param(spec, "p1"), get_param(spec, "p2"), get_param(spec, "p3"),
                             get_param(spec, "p4"));
    }
    if (f == "isotropic") {
        const double d = get_param(spec, "d");
        if (d < 2.0 || d != std::floor(d)) {
            throw std::invalid_argument("isotropic: d must be an integer >= 2");
        }
        return isotropic(static_cast<std::size_t>(d), get_param(spec, "p"));
    }
    if (f == "horodecki") {
        return horodecki_3x3(get_param(spec, "a"));
    }
    if (f == "colored" || f == "colored_noise") {
        return colored_noise(get_param(spec, "p"));
    }
    if (f == "wstate" || f == "w") {
        return w_state();
    }
    throw std::invalid_argument("unknown family '" + f + "'");
}

}  // namespace wk
