#include "witnesskit/densop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "witnesskit/kernels.hpp"
#include "witnesskit/tolerances.hpp"

namespace wk {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) {
        s[k - 1] = s[k] * dims[k];
    }
    return s;
}

void require_factorization(const ComplexMatrix& m, const std::vector<std::size_t>& dims) {
    if (m.rows != m.cols) {
        throw std::invalid_argument("multipartite op: matrix not square");
    }
    std::size_t prod = 1;
    for (std::size_t d : dims) {
        if (d < 2) {
            throw std::invalid_argument("multipartite op: local dimension < 2");
        }
        prod *= d;
    }
    if (dims.empty() || prod != m.rows) {
        throw std::invalid_argument("multipartite op: dims do not factor the matrix side");
    }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    ComplexMatrix r = a;
    const double one[2] = {1.0, 0.0};
    kernels::ops().axpy(one, flat(b), flat(r), r.data.size());
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "sub");
    ComplexMatrix r = a;
    const double minus[2] = {-1.0, 0.0};
    kernels::ops().axpy(minus, flat(b), flat(r), r.data.size());
    return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& m) {
    ComplexMatrix r(m.rows, m.cols);
    const double a[2] = {s.real(), s.imag()};
    kernels::ops().axpy(a, flat(m), flat(r), r.data.size());
    return r;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions differ");
    }
    ComplexMatrix c(a.rows, b.cols);
    const auto& k = kernels::ops();
    for (std::size_t i = 0; i < a.rows; ++i) {
        double* ci = flat(c) + 2 * i * c.cols;
        for (std::size_t l = 0; l < a.cols; ++l) {
            const cplx s = a.at(i, l);
            if (s == cplx(0.0, 0.0)) {
                continue;
            }
            const double sv[2] = {s.real(), s.imag()};
            k.axpy(sv, flat(b) + 2 * l * b.cols, ci, b.cols);
        }
    }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            r.at(j, i) = std::conj(m.at(i, j));
        }
    }
    return r;
}

std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& v) {
    if (m.cols != v.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    std::vector<cplx> w(m.rows);
    const double* vf = reinterpret_cast<const double*>(v.data());
    for (std::size_t i = 0; i < m.rows; ++i) {
        double out[2];
        kernels::ops().cdotu(flat(m) + 2 * i * m.cols, vf, m.cols, out);
        w[i] = cplx(out[0], out[1]);
    }
    return w;
}

cplx trace(const ComplexMatrix& m) {
    if (m.rows != m.cols) {
        throw std::invalid_argument("trace: matrix not square");
    }
    cplx t = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        t += m.at(i, i);
    }
    return t;
}

double frobenius(const ComplexMatrix& m) {
    double s = 0.0;
    kernels::ops().sumsq(flat(m), m.data.size(), &s);
    return std::sqrt(s);
}

bool is_hermitian(const ComplexMatrix& m, double eps) {
    if (m.rows != m.cols) {
        return false;
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = i; j < m.cols; ++j) {
            if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > eps) {
                return false;
            }
        }
    }
    return true;
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "hs_inner");
    double out[2];
    // sum conj(a_ij) b_ij = Tr(a^dag b) = Tr(a b) for Hermitian a
    kernels::ops().cdotc(flat(a), flat(b), a.data.size(), out);
    return out[0];
}

DensityOperator make_density(ComplexMatrix m, std::vector<std::size_t> dims, bool check_psd) {
    require_factorization(m, dims);
    if (!is_hermitian(m, tol().density_hermiticity)) {
        throw std::invalid_argument("density operator: not Hermitian");
    }
    if (std::abs(trace(m) - cplx(1.0)) > tol().trace_one) {
        throw std::invalid_argument("density operator: trace differs from 1");
    }
    if (check_psd && !is_psd(m)) {
        throw std::invalid_argument("density operator: negative eigenvalue");
    }
    return DensityOperator{std::move(m), std::move(dims)};
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            const cplx aij = a.at(i, j);
            if (aij == cplx(0.0, 0.0)) {
                continue;
            }
            for (std::size_t k = 0; k < b.rows; ++k) {
                for (std::size_t l = 0; l < b.cols; ++l) {
                    r.at(i * b.rows + k, j * b.cols + l) = aij * b.at(k, l);
                }
            }
        }
    }
    return r;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                std::size_t party) {
    require_factorization(m, dims);
    if (party >= dims.size()) {
        throw std::out_of_range("partial_transpose: party index out of range");
    }
    const auto strides = strides_of(dims);
    const std::size_t st = strides[party];
    const std::size_t d = dims[party];
    ComplexMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const std::size_t di = (i / st) % d;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const std::size_t dj = (j / st) % d;
            const std::size_t ip = i - di * st + dj * st;
            const std::size_t jp = j - dj * st + di * st;
            r.at(ip, jp) = m.at(i, j);
        }
    }
    return r;
}

ComplexMatrix partial_transpose(const DensityOperator& rho, std::size_t party) {
    return partial_transpose(rho.matrix, rho.dims, party);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            std::vector<std::size_t> keep) {
    require_factorization(m, dims);
    std::sort(keep.begin(), keep.end());
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: empty keep set");
    }
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
        throw std::invalid_argument("partial_trace: duplicate keep index");
    }
    if (keep.back() >= dims.size()) {
        throw std::out_of_range("partial_trace: keep index out of range");
    }
    const auto strides = strides_of(dims);
    std::vector<std::size_t> kept_dims;
    for (std::size_t k : keep) {
        kept_dims.push_back(dims[k]);
    }
    const auto kept_strides = strides_of(kept_dims);
    std::vector<bool> is_kept(dims.size(), false);
    for (std::size_t k : keep) {
        is_kept[k] = true;
    }
    std::size_t out_dim = 1;
    for (std::size_t d : kept_dims) {
        out_dim *= d;
    }
    ComplexMatrix r(out_dim, out_dim);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            std::size_t oi = 0, oj = 0;
            bool diagonal_in_traced = true;
            std::size_t slot = 0;
            for (std::size_t p = 0; p < dims.size(); ++p) {
                const std::size_t di = (i / strides[p]) % dims[p];
                const std::size_t dj = (j / strides[p]) % dims[p];
                if (is_kept[p]) {
                    oi += di * kept_strides[slot];
                    oj += dj * kept_strides[slot];
                    ++slot;
                } else if (di != dj) {
                    diagonal_in_traced = false;
                    break;
                }
            }
            if (diagonal_in_traced) {
                r.at(oi, oj) += m.at(i, j);
            }
        }
    }
    return r;
}

DensityOperator partial_trace(const DensityOperator& rho, std::vector<std::size_t> keep) {
    ComplexMatrix m = partial_trace(rho.matrix, rho.dims, keep);
    std::sort(keep.begin(), keep.end());
    std::vector<std::size_t> kept_dims;
    for (std::size_t k : keep) {
        kept_dims.push_back(rho.dims[k]);
    }
    // Valid input implies valid marginal; skip the eigenvalue pass.
    return DensityOperator{std::move(m), std::move(kept_dims)};
}

namespace {

double offdiag_norm_sq(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < a.rows; ++p) {
        for (std::size_t q = p + 1; q < a.cols; ++q) {
            s += std::norm(a.at(p, q));
        }
    }
    return s;
}

// One plane rotation zeroing a(p,q): unitary U = diag(1, e^{-i phi}) * G with
// G the classic 2x2 rotation for the phase-reduced real block.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& w, std::size_t p, std::size_t q) {
    const cplx beta = a.at(p, q);
    const double r = std::abs(beta);
    if (r == 0.0) {
        return;
    }
    const cplx phase = beta / r;             // e^{i phi}
    const cplx phase_c = std::conj(phase);   // e^{-i phi}
    const double app = a.at(p, p).real();
    const double aqq = a.at(q, q).real();
    const double tau = (app - aqq) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows;
    // a <- a U, column pass over all rows
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a.at(k, p);
        const cplx akq = a.at(k, q);
        a.at(k, p) = c * akp + s * phase_c * akq;
        a.at(k, q) = -s * akp + c * phase_c * akq;
    }
    // a <- U^dag a, simultaneous row pass
    const auto& kr = kernels::ops();
    const double ca[2] = {c, 0.0};
    const double sb[2] = {s * phase.real(), s * phase.imag()};
    const double sc[2] = {-s, 0.0};
    const double cd[2] = {c * phase.real(), c * phase.imag()};
    kr.mix2(ca, sb, sc, cd, flat(a) + 2 * p * n, flat(a) + 2 * q * n, n);
    // accumulated vectors, stored transposed: w <- U^T w is again a row pass
    const double tb[2] = {s * phase_c.real(), s * phase_c.imag()};
    const double td[2] = {c * phase_c.real(), c * phase_c.imag()};
    kr.mix2(ca, tb, sc, td, flat(w) + 2 * p * n, flat(w) + 2 * q * n, n);

    // restore the exactly-known block entries
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;
    a.at(p, p) = a.at(p, p).real();
    a.at(q, q) = a.at(q, q).real();
}

bool lex_less(const ComplexMatrix& w, std::size_t ra, std::size_t rb) {
    for (std::size_t j = 0; j < w.cols; ++j) {
        const cplx x = w.at(ra, j), y = w.at(rb, j);
        if (x.real() != y.real()) {
            return x.real() < y.real();
        }
        if (x.imag() != y.imag()) {
            return x.imag() < y.imag();
        }
    }
    return false;
}

}  // namespace

Spectrum hermitian_eig(const ComplexMatrix& m) {
    if (m.rows != m.cols) {
        throw std::invalid_argument("hermitian_eig: matrix not square");
    }
    if (!is_hermitian(m, tol().hermiticity)) {
        throw std::invalid_argument("hermitian_eig: input not Hermitian");
    }
    const std::size_t n = m.rows;
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
        }
    }
    ComplexMatrix w = ComplexMatrix::identity(n);  // holds V^T while iterating

    const double scale = std::max(frobenius(a), 1.0);
    const double stop_sq = 1e-28 * scale * scale;
    for (int sweep = 0; sweep < 100 && offdiag_norm_sq(a) > stop_sq; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                jacobi_rotate(a, w, p, q);
            }
        }
    }

    // phase convention: first component of magnitude > 1e-12 made real positive
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z = w.at(k, j);
            if (std::abs(z) > 1e-12) {
                const cplx ph = std::conj(z) / std::abs(z);
                for (std::size_t l = 0; l < n; ++l) {
                    w.at(k, l) *= ph;
                }
                break;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a.at(x, x).real() > a.at(y, y).real();
    });
    const double tie = 1e-12 * scale;
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n &&
               a.at(order[lo], order[lo]).real() - a.at(order[hi], order[hi]).real() <= tie) {
            ++hi;
        }
        std::sort(order.begin() + lo, order.begin() + hi,
                  [&](std::size_t x, std::size_t y) { return lex_less(w, x, y); });
        lo = hi;
    }

    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a.at(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors.at(i, k) = w.at(order[k], i);
        }
    }
    return out;
}

bool is_psd(const ComplexMatrix& m) { return is_psd(m, tol().psd_floor); }

bool is_psd(const ComplexMatrix& m, double floor) {
    const Spectrum s = hermitian_eig(m);
    return s.eigenvalues.empty() || s.eigenvalues.back() >= floor;
}

std::string density_to_json(const DensityOperator& rho, bool pretty) {
    nlohmann::ordered_json j;
    j["dims"] = rho.dims;
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rho.matrix.rows; ++i) {
        nlohmann::ordered_json rrow = nlohmann::ordered_json::array();
        nlohmann::ordered_json irow = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < rho.matrix.cols; ++k) {
            rrow.push_back(rho.matrix.at(i, k).real());
            irow.push_back(rho.matrix.at(i, k).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return pretty ? j.dump(2) : j.dump();
}

DensityOperator density_from_json(const std::string& text, bool check_psd) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("matrix JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dims") || !j.contains("re") || !j.contains("im")) {
        throw std::invalid_argument("matrix JSON: need dims, re and im fields");
    }
    std::vector<std::size_t> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_unsigned() || d.get<std::size_t>() < 2) {
            throw std::invalid_argument("matrix JSON: dims must be integers >= 2");
        }
        dims.push_back(d.get<std::size_t>());
    }
    std::size_t side = 1;
    for (std::size_t d : dims) {
        side *= d;
    }
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (!re.is_array() || !im.is_array() || re.size() != side || im.size() != side) {
        throw std::invalid_argument("matrix JSON: re/im row count mismatch");
    }
    ComplexMatrix m(side, side);
    for (std::size_t i = 0; i < side; ++i) {
        if (!re[i].is_array() || !im[i].is_array() || re[i].size() != side ||
            im[i].size() != side) {
            throw std::invalid_argument("matrix JSON: re/im column count mismatch");
        }
        for (std::size_t k = 0; k < side; ++k) {
            if (!re[i][k].is_number() || !im[i][k].is_number()) {
                throw std::invalid_argument("matrix JSON: non-numeric entry");
            }
            m.at(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
        }
    }
    return make_density(std::move(m), std::move(dims), check_psd);
}

}  // namespace wk
