#include "witnesskit/tomo.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "witnesskit/kernels.hpp"

namespace wk {

namespace {

const cplx kI(0.0, 1.0);

double scale_factor(std::size_t d) {
    return static_cast<double>(d) / (2.0 * (static_cast<double>(d) - 1.0));
}

void require_scaled_shape(const std::vector<std::size_t>& dims) {
    if (dims.size() != 2 || dims[0] != dims[1]) {
        throw std::invalid_argument("QuditScaled needs exactly two parties of equal dimension");
    }
}

// Iterates index tuples in row-major order; returns false when exhausted.
bool next_tuple(std::vector<std::size_t>& mu, const std::vector<std::size_t>& radices) {
    for (std::size_t k = mu.size(); k-- > 0;) {
        if (++mu[k] < radices[k]) {
            return true;
        }
        mu[k] = 0;
    }
    return false;
}

const TomographicBasis& basis_for(std::size_t d) {
    static std::map<std::size_t, TomographicBasis> cache;
    auto it = cache.find(d);
    if (it == cache.end()) {
        it = cache.emplace(d, gellmann_basis(d)).first;
    }
    return it->second;
}

ComplexMatrix basis_kron(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& mu) {
    ComplexMatrix op = basis_for(dims[0]).ops[mu[0]];
    for (std::size_t k = 1; k < dims.size(); ++k) {
        op = tensor_product(op, basis_for(dims[k]).ops[mu[k]]);
    }
    return op;
}

}  // namespace

TomographicBasis pauli_basis() { return gellmann_basis(2); }

TomographicBasis gellmann_basis(std::size_t d) {
    if (d < 2) {
        throw std::invalid_argument("gellmann_basis: dimension must be >= 2");
    }
    TomographicBasis b;
    b.d = d;
    b.ops.push_back(ComplexMatrix::identity(d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j + 1; k < d; ++k) {
            ComplexMatrix m(d, d);
            m.at(j, k) = 1.0;
            m.at(k, j) = 1.0;
            b.ops.push_back(std::move(m));
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j + 1; k < d; ++k) {
            ComplexMatrix m(d, d);
            m.at(j, k) = -kI;
            m.at(k, j) = kI;
            b.ops.push_back(std::move(m));
        }
    }
    for (std::size_t l = 1; l < d; ++l) {
        ComplexMatrix m(d, d);
        const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1.0)));
        for (std::size_t j = 0; j < l; ++j) {
            m.at(j, j) = norm;
        }
        m.at(l, l) = -norm * static_cast<double>(l);
        b.ops.push_back(std::move(m));
    }
    return b;
}

std::vector<std::size_t> ExtendedCorrelationTensor::radices() const {
    std::vector<std::size_t> r;
    for (std::size_t d : dims) {
        r.push_back(d * d);
    }
    return r;
}

std::size_t ExtendedCorrelationTensor::index_of(const std::vector<std::size_t>& mu) const {
    if (mu.size() != dims.size()) {
        throw std::invalid_argument("tensor index: wrong arity");
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        const std::size_t radix = dims[k] * dims[k];
        if (mu[k] >= radix) {
            throw std::out_of_range("tensor index: component out of range");
        }
        idx = idx * radix + mu[k];
    }
    return idx;
}

double ExtendedCorrelationTensor::at(const std::vector<std::size_t>& mu) const {
    return values[index_of(mu)];
}

double& ExtendedCorrelationTensor::at(const std::vector<std::size_t>& mu) {
    return values[index_of(mu)];
}

ExtendedCorrelationTensor state_to_tensor(const DensityOperator& rho, Convention convention) {
    if (convention == Convention::QuditScaled) {
        require_scaled_shape(rho.dims);
    }
    ExtendedCorrelationTensor t = operator_to_tensor(rho.matrix, rho.dims);
    return convention == Convention::QuditScaled ? to_scaled(t) : t;
}

ExtendedCorrelationTensor operator_to_tensor(const ComplexMatrix& m,
                                             const std::vector<std::size_t>& dims) {
    if (dims.empty()) {
        throw std::invalid_argument("operator_to_tensor: empty dims");
    }
    std::size_t side = 1;
    for (std::size_t d : dims) {
        if (d < 2) {
            throw std::invalid_argument("operator_to_tensor: dimensions must be >= 2");
        }
        side *= d;
    }
    if (m.rows != side || m.cols != side) {
        throw std::invalid_argument("operator_to_tensor: matrix does not match dims");
    }
    ExtendedCorrelationTensor t;
    t.dims = dims;
    t.convention = Convention::RawMoment;
    const auto radices = t.radices();
    std::size_t total = 1;
    for (std::size_t r : radices) {
        total *= r;
    }
    t.values.resize(total);
    std::vector<std::size_t> mu(dims.size(), 0);
    std::size_t flat_idx = 0;
    do {
        t.values[flat_idx++] = hs_inner(basis_kron(dims, mu), m);
    } while (next_tuple(mu, radices));
    return t;
}

ComplexMatrix tensor_contraction_operator(const ExtendedCorrelationTensor& t) {
    if (t.convention != Convention::RawMoment) {
        // Scaled values pair with scaled moments; the conversion for
        // coefficients runs opposite to the one for moments, so refuse
        // rather than guess.
        throw std::invalid_argument("tensor_contraction_operator: coefficients must be RawMoment");
    }
    const auto radices = t.radices();
    std::size_t side = 1;
    for (std::size_t d : t.dims) {
        side *= d;
    }
    std::size_t total = 1;
    for (std::size_t r : radices) {
        total *= r;
    }
    if (t.values.size() != total) {
        throw std::invalid_argument("tensor_contraction_operator: incomplete tensor");
    }
    ComplexMatrix m(side, side);
    std::vector<std::size_t> mu(t.dims.size(), 0);
    std::size_t flat_idx = 0;
    do {
        const double v = t.values[flat_idx++];
        if (v == 0.0) {
            continue;
        }
        const ComplexMatrix op = basis_kron(t.dims, mu);
        const double a[2] = {v, 0.0};
        kernels::ops().axpy(a, flat(op), flat(m), m.data.size());
    } while (next_tuple(mu, radices));
    return m;
}

DensityOperator tensor_to_state(const ExtendedCorrelationTensor& tin) {
    const ExtendedCorrelationTensor t =
        tin.convention == Convention::QuditScaled ? to_raw(tin) : tin;
    const auto radices = t.radices();
    std::size_t side = 1;
    for (std::size_t d : t.dims) {
        side *= d;
    }
    std::size_t total = 1;
    for (std::size_t r : radices) {
        total *= r;
    }
    if (t.values.size() != total) {
        throw std::invalid_argument("tensor_to_state: incomplete tensor");
    }
    ComplexMatrix m(side, side);
    std::vector<std::size_t> mu(t.dims.size(), 0);
    std::size_t flat_idx = 0;
    do {
        const double v = t.values[flat_idx++];
        if (v == 0.0) {
            continue;
        }
        // basis op norms: Tr(sigma_0^2) = d, Tr(sigma_i^2) = 2
        double norm = 1.0;
        for (std::size_t k = 0; k < mu.size(); ++k) {
            norm *= (mu[k] == 0) ? static_cast<double>(t.dims[k]) : 2.0;
        }
        const ComplexMatrix op = basis_kron(t.dims, mu);
        const double a[2] = {v / norm, 0.0};
        kernels::ops().axpy(a, flat(op), flat(m), m.data.size());
    } while (next_tuple(mu, radices));
    return make_density(std::move(m), t.dims, /*check_psd=*/false);
}

ExtendedCorrelationTensor to_raw(const ExtendedCorrelationTensor& t) {
    if (t.convention == Convention::RawMoment) {
        return t;
    }
    require_scaled_shape(t.dims);
    ExtendedCorrelationTensor r = t;
    r.convention = Convention::RawMoment;
    const double f = scale_factor(t.dims[0]);
    const std::size_t n = t.dims[0] * t.dims[0];
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) {
            r.values[i * n + j] /= f;
        }
    }
    return r;
}

ExtendedCorrelationTensor to_scaled(const ExtendedCorrelationTensor& t) {
    if (t.convention == Convention::QuditScaled) {
        return t;
    }
    require_scaled_shape(t.dims);
    ExtendedCorrelationTensor r = t;
    r.convention = Convention::QuditScaled;
    const double f = scale_factor(t.dims[0]);
    const std::size_t n = t.dims[0] * t.dims[0];
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) {
            r.values[i * n + j] *= f;
        }
    }
    return r;
}

double sum_of_squares(const ExtendedCorrelationTensor& t) {
    return sum_of_squares(t, [](const std::vector<std::size_t>& mu) {
        for (std::size_t m : mu) {
            if (m == 0) {
                return false;
            }
        }
        return true;
    });
}

double sum_of_squares(const ExtendedCorrelationTensor& t, const IndexFilter& filter) {
    const auto radices = t.radices();
    std::vector<std::size_t> mu(t.dims.size(), 0);
    double s = 0.0;
    std::size_t flat_idx = 0;
    do {
        if (filter(mu)) {
            s += t.values[flat_idx] * t.values[flat_idx];
        }
        ++flat_idx;
    } while (next_tuple(mu, radices));
    return s;
}

std::string tensor_to_csv(const ExtendedCorrelationTensor& t) {
    std::string out;
    for (std::size_t k = 1; k <= t.dims.size(); ++k) {
        out += "mu_" + std::to_string(k) + ",";
    }
    out += "value\n";
    const auto radices = t.radices();
    std::vector<std::size_t> mu(t.dims.size(), 0);
    std::size_t flat_idx = 0;
    char buf[40];
    do {
        for (std::size_t m : mu) {
            out += std::to_string(m) + ",";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", t.values[flat_idx++]);
        out += buf;
        out += "\n";
    } while (next_tuple(mu, radices));
    return out;
}

}  // namespace wk
