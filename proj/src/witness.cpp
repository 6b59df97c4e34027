#include "witnesskit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "witnesskit/kernels.hpp"
#include "witnesskit/tolerances.hpp"

namespace wk {

namespace {

bool next_tuple(std::vector<std::size_t>& mu, const std::vector<std::size_t>& radices) {
    for (std::size_t k = mu.size(); k-- > 0;) {
        if (++mu[k] < radices[k]) {
            return true;
        }
        mu[k] = 0;
    }
    return false;
}

// Tr(sigma_mu_k^2) per party: d for the identity slot, 2 otherwise.
double tuple_norm(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& mu) {
    double n = 1.0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        n *= (mu[k] == 0) ? static_cast<double>(dims[k]) : 2.0;
    }
    return n;
}

cplx vdot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double out[2];
    kernels::ops().cdotc(reinterpret_cast<const double*>(x.data()),
                         reinterpret_cast<const double*>(y.data()), x.size(), out);
    return {out[0], out[1]};
}

std::vector<cplx> random_unit(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(n);
    double s = 0.0;
    for (auto& z : v) {
        z = cplx(g(rng), g(rng));
        s += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto& z : v) {
        z *= inv;
    }
    return v;
}

std::vector<cplx> kron_range(const std::vector<std::vector<cplx>>& parts, std::size_t from,
                             std::size_t to) {
    std::vector<cplx> u{cplx(1.0, 0.0)};
    for (std::size_t k = from; k < to; ++k) {
        const auto& p = parts[k];
        std::vector<cplx> nu(u.size() * p.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                nu[i * p.size() + j] = u[i] * p[j];
            }
        }
        u = std::move(nu);
    }
    return u;
}

double product_objective(const ComplexMatrix& k, const std::vector<std::vector<cplx>>& parts) {
    const auto u = kron_range(parts, 0, parts.size());
    return vdot(u, matvec(k, u)).real();
}

// One multi-sweep alternating maximization from a random product start.
// Every party update replaces that factor by the top eigenvector of the
// operator compressed to its slot, so the objective cannot decrease.
double seesaw_from(const ComplexMatrix& k, const std::vector<std::size_t>& dims,
                   std::mt19937_64& rng, int max_sweeps, bool& monotone) {
    const std::size_t nparties = dims.size();
    std::size_t total = 1;
    for (std::size_t d : dims) {
        total *= d;
    }
    std::vector<std::vector<cplx>> parts;
    parts.reserve(nparties);
    for (std::size_t d : dims) {
        parts.push_back(random_unit(d, rng));
    }
    double obj = product_objective(k, parts);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double sweep_obj = obj;
        for (std::size_t j = 0; j < nparties; ++j) {
            const std::size_t dj = dims[j];
            std::size_t suffix_len = 1;
            for (std::size_t m = j + 1; m < nparties; ++m) {
                suffix_len *= dims[m];
            }
            const auto prefix = kron_range(parts, 0, j);
            const auto suffix = kron_range(parts, j + 1, nparties);
            std::vector<std::vector<cplx>> cand(dj, std::vector<cplx>(total, cplx(0.0, 0.0)));
            for (std::size_t a = 0; a < dj; ++a) {
                for (std::size_t ip = 0; ip < prefix.size(); ++ip) {
                    const std::size_t base = (ip * dj + a) * suffix_len;
                    for (std::size_t is = 0; is < suffix_len; ++is) {
                        cand[a][base + is] = prefix[ip] * suffix[is];
                    }
                }
            }
            std::vector<std::vector<cplx>> image(dj);
            for (std::size_t b = 0; b < dj; ++b) {
                image[b] = matvec(k, cand[b]);
            }
            ComplexMatrix slot(dj, dj);
            for (std::size_t a = 0; a < dj; ++a) {
                for (std::size_t b = a; b < dj; ++b) {
                    const cplx v = vdot(cand[a], image[b]);
                    slot.at(a, b) = (a == b) ? cplx(v.real(), 0.0) : v;
                    if (b > a) {
                        slot.at(b, a) = std::conj(v);
                    }
                }
            }
            const Spectrum sp = hermitian_eig(slot);
            for (std::size_t a = 0; a < dj; ++a) {
                parts[j][a] = sp.eigenvectors.at(a, 0);
            }
            sweep_obj = sp.eigenvalues[0];
        }
        const double scale = std::max(1.0, std::fabs(obj));
        if (sweep_obj < obj - 1e-10 * scale) {
            monotone = false;
        }
        const double improve = sweep_obj - obj;
        obj = std::max(obj, sweep_obj);
        if (improve < tol().seesaw_improve) {
            break;
        }
    }
    return obj;
}

// Upper bound over product states for a bipartite operator whose expansion
// has no single-party parts: constant term plus the correlation-block largest
// singular value times the two Bloch-ball radii sqrt(2 - 2/d). Returns false
// when local-average coefficients are present; the bound does not apply then.
bool correlation_block_bound(const ComplexMatrix& k, const std::vector<std::size_t>& dims,
                             double& bound) {
    const ExtendedCorrelationTensor raw = operator_to_tensor(k, dims);
    const std::size_t na = dims[0] * dims[0];
    const std::size_t nb = dims[1] * dims[1];
    std::vector<double> c(raw.values.size());
    double cmax = 0.0;
    std::vector<std::size_t> mu(2, 0);
    std::size_t idx = 0;
    const auto radices = raw.radices();
    do {
        c[idx] = raw.values[idx] / tuple_norm(dims, mu);
        cmax = std::max(cmax, std::fabs(c[idx]));
        ++idx;
    } while (next_tuple(mu, radices));
    const double gate = tol().local_average * std::max(1.0, cmax);
    for (std::size_t i = 1; i < na; ++i) {
        if (std::fabs(c[i * nb]) > gate) {
            return false;
        }
    }
    for (std::size_t j = 1; j < nb; ++j) {
        if (std::fabs(c[j]) > gate) {
            return false;
        }
    }
    ComplexMatrix gram(nb - 1, nb - 1);
    for (std::size_t p = 1; p < nb; ++p) {
        for (std::size_t q = 1; q < nb; ++q) {
            double s = 0.0;
            for (std::size_t i = 1; i < na; ++i) {
                s += c[i * nb + p] * c[i * nb + q];
            }
            gram.at(p - 1, q - 1) = s;
        }
    }
    const double top = std::max(hermitian_eig(gram).eigenvalues[0], 0.0);
    const double ra = std::sqrt(2.0 - 2.0 / static_cast<double>(dims[0]));
    const double rb = std::sqrt(2.0 - 2.0 / static_cast<double>(dims[1]));
    bound = c[0] + std::sqrt(top) * ra * rb;
    return true;
}

double tensor_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// Smallest nonzero magnitude, or 0 when the tensor vanishes entirely.
double min_nonzero(const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) {
        if (x != 0.0) {
            m = std::min(m, std::fabs(x));
        }
    }
    return std::isinf(m) ? 0.0 : m;
}

double require_param(const FamilySpec& spec, const char* name) {
    const auto it = spec.params.find(name);
    if (it == spec.params.end()) {
        throw std::invalid_argument(std::string("family ") + spec.family + " needs parameter " +
                                    name);
    }
    return it->second;
}

}  // namespace

DeltaTensor delta_tensor(const DensityOperator& rho, const DensityOperator& rho0) {
    if (rho.dims != rho0.dims) {
        throw std::invalid_argument("delta_tensor: dimension mismatch");
    }
    DeltaTensor d = state_to_tensor(rho, Convention::RawMoment);
    const ExtendedCorrelationTensor t0 = state_to_tensor(rho0, Convention::RawMoment);
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        double v = d.values[i] - t0.values[i];
        if (std::fabs(v) < tol().zero_weight) {
            v = 0.0;
        }
        d.values[i] = v;
    }
    // both traces are one, so the all-identity slot is exactly zero
    d.values[0] = 0.0;
    return d;
}

OverlapBound max_product_overlap(const ComplexMatrix& k, const std::vector<std::size_t>& dims,
                                 const SeeSawOptions& opt) {
    if (dims.empty()) {
        throw std::invalid_argument("max_product_overlap: empty dims");
    }
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d < 2) {
            throw std::invalid_argument("max_product_overlap: dimensions must be >= 2");
        }
        total *= d;
    }
    if (k.rows != total || k.cols != total) {
        throw std::invalid_argument("max_product_overlap: operator does not match dims");
    }
    if (!is_hermitian(k, tol().hermiticity)) {
        throw std::invalid_argument("max_product_overlap: operator must be Hermitian");
    }
    if (opt.starts < 1 || opt.max_sweeps < 1) {
        throw std::invalid_argument("max_product_overlap: starts and max_sweeps must be positive");
    }
    OverlapBound ob;
    ob.upper = hermitian_eig(k).eigenvalues[0];
    if (dims.size() == 2) {
        double refined = 0.0;
        if (correlation_block_bound(k, dims, refined)) {
            ob.upper = std::min(ob.upper, refined);
        }
    }
    ob.lower = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < opt.starts; ++s) {
        std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(s));
        ob.lower = std::max(ob.lower, seesaw_from(k, dims, rng, opt.max_sweeps, ob.monotone));
    }
    // both ends bound the same maximum; eigensolver roundoff must not leave
    // the interval inverted
    ob.lower = std::min(ob.lower, ob.upper);
    return ob;
}

double bound_used(const LinearWitness& w) {
    return w.npt_certified ? w.bound_lower : w.bound_upper;
}

double bound_used(const QuadraticIdentifier& q) {
    return q.npt_certified ? q.bound_lower : q.bound_upper;
}

LinearWitness build_linear(const DensityOperator& rho, const DensityOperator& rho0,
                           const WitnessOptions& opt) {
    LinearWitness w;
    w.delta = delta_tensor(rho, rho0);
    const double nz = min_nonzero(w.delta.values);
    if (nz == 0.0) {
        // rho is indistinguishable from rho0: nothing to witness
        w.provenance = BoundProvenance::ClosedForm;
        return w;
    }
    w.normalization = nz;
    for (double& v : w.delta.values) {
        v /= nz;
    }
    if (opt.family) {
        const std::string& f = opt.family->family;
        if (f == "isotropic") {
            throw std::invalid_argument(
                "build_linear: the isotropic family carries a sign ambiguity; use build_quadratic");
        }
        if (f == "werner" || f == "belldiag") {
            w.bound_lower = w.bound_upper = 1.0;
            w.provenance = BoundProvenance::ClosedForm;
            return w;
        }
        if (f == "wstate") {
            w.bound_lower = w.bound_upper = 23.0 / 3.0;
            w.provenance = BoundProvenance::ClosedForm;
            return w;
        }
        if (f == "colored") {
            const double p = require_param(*opt.family, "p");
            if (std::fabs(p - 2.0 / 3.0) <= 1e-9) {
                w.bound_lower = w.bound_upper = std::sqrt(5.0);
                w.provenance = BoundProvenance::ClosedForm;
                return w;
            }
            // other mixing weights have no tabulated bound; fall through
        }
    }
    if (opt.rho0_is_ppt_projection) {
        // The projection inner product (delta | rho0) dominates (delta | sigma)
        // for every trace-one PPT sigma, separables included, whether or not
        // rho0 itself is a state. A nonzero delta then certifies a negative
        // partial transpose.
        const ExtendedCorrelationTensor t0 = state_to_tensor(rho0, Convention::RawMoment);
        const double b = tensor_dot(w.delta.values, t0.values);
        w.bound_lower = w.bound_upper = b;
        w.provenance = BoundProvenance::ClosedForm;
        w.npt_certified = true;
        return w;
    }
    const ComplexMatrix k = tensor_contraction_operator(w.delta);
    const OverlapBound ob = max_product_overlap(k, rho.dims, opt.seesaw);
    w.bound_lower = ob.lower;
    w.bound_upper = ob.upper;
    w.provenance = BoundProvenance::SeeSaw;
    return w;
}

QuadraticIdentifier build_quadratic(const DensityOperator& rho, const DensityOperator& rho0,
                                    const WitnessOptions& opt) {
    QuadraticIdentifier q;
    // Diagonal-pair criteria exist for every mixing weight, reference or not,
    // so they are built without the difference tensor. A Werner state is the
    // two-dimensional isotropic state; its raw and scaled moments coincide.
    if (opt.family && (opt.family->family == "isotropic" || opt.family->family == "werner")) {
        const bool werner_family = opt.family->family == "werner";
        const double p = require_param(*opt.family, "p");
        const std::size_t d =
            werner_family ? 2 : static_cast<std::size_t>(require_param(*opt.family, "d"));
        if (rho.dims != std::vector<std::size_t>{d, d}) {
            throw std::invalid_argument("build_quadratic: state does not match the family dims");
        }
        q.weights.dims = rho.dims;
        q.weights.convention = Convention::QuditScaled;
        q.weights.values.assign(d * d * d * d, 0.0);
        for (std::size_t j = 1; j < d * d; ++j) {
            q.weights.at({j, j}) = 1.0;
        }
        q.eval_convention = Convention::QuditScaled;
        q.bound_lower = q.bound_upper = p / (static_cast<double>(d) - 1.0);
        q.provenance = BoundProvenance::ClosedForm;
        return q;
    }
    const DeltaTensor delta = delta_tensor(rho, rho0);
    const double nz = min_nonzero(delta.values);
    q.weights = delta;
    q.eval_convention = Convention::RawMoment;
    if (nz == 0.0) {
        q.provenance = BoundProvenance::ClosedForm;
        return q;
    }
    for (double& v : q.weights.values) {
        const double s = v / nz;
        v = s * s;
    }
    if (opt.family) {
        const std::string& f = opt.family->family;
        if (f == "wstate") {
            q.bound_lower = q.bound_upper = 29.0 / 3.0;
            q.provenance = BoundProvenance::ClosedForm;
            return q;
        }
        if (f == "colored") {
            const double p = require_param(*opt.family, "p");
            if (std::fabs(p - 2.0 / 3.0) <= 1e-9) {
                q.bound_lower = q.bound_upper = 35.0 / 13.0;
                q.provenance = BoundProvenance::ClosedForm;
                return q;
            }
        }
    }
    if (opt.rho0_is_ppt_projection) {
        q.npt_certified = true;
    }
    // Bound the cross term sum_mu w_mu T_mu(rho) T_mu(sigma) over product
    // sigma: a see-saw interval for the operator with those coefficients.
    ExtendedCorrelationTensor cross = q.weights;
    const ExtendedCorrelationTensor traw = state_to_tensor(rho, Convention::RawMoment);
    for (std::size_t i = 0; i < cross.values.size(); ++i) {
        cross.values[i] = q.weights.values[i] * traw.values[i];
    }
    const ComplexMatrix k = tensor_contraction_operator(cross);
    const OverlapBound ob = max_product_overlap(k, rho.dims, opt.seesaw);
    q.bound_lower = ob.lower;
    q.bound_upper = ob.upper;
    q.provenance = BoundProvenance::SeeSaw;
    return q;
}

DetectionReport evaluate(const LinearWitness& w, const DensityOperator& rho) {
    if (rho.dims != w.delta.dims) {
        throw std::invalid_argument("evaluate: state dims do not match the witness");
    }
    const ExtendedCorrelationTensor t = state_to_tensor(rho, Convention::RawMoment);
    DetectionReport r;
    r.bound_used = bound_used(w);
    const auto radices = w.delta.radices();
    std::vector<std::size_t> mu(w.delta.dims.size(), 0);
    std::size_t i = 0;
    do {
        const double d = w.delta.values[i];
        if (d != 0.0) {
            const double c = d * t.values[i];
            r.terms.push_back({mu, c});
            r.value += c;
        }
        ++i;
    } while (next_tuple(mu, radices));
    r.verdict = r.value > r.bound_used + tol().detection_margin ? Verdict::Entangled
                                                                : Verdict::Inconclusive;
    return r;
}

DetectionReport evaluate(const QuadraticIdentifier& q, const DensityOperator& rho) {
    if (rho.dims != q.weights.dims) {
        throw std::invalid_argument("evaluate: state dims do not match the identifier");
    }
    const ExtendedCorrelationTensor t = state_to_tensor(rho, q.eval_convention);
    DetectionReport r;
    r.bound_used = bound_used(q);
    const auto radices = q.weights.radices();
    std::vector<std::size_t> mu(q.weights.dims.size(), 0);
    std::size_t i = 0;
    do {
        const double wv = q.weights.values[i];
        if (wv != 0.0) {
            const double c = wv * t.values[i] * t.values[i];
            r.terms.push_back({mu, c});
            r.value += c;
        }
        ++i;
    } while (next_tuple(mu, radices));
    r.verdict = r.value > r.bound_used + tol().detection_margin ? Verdict::Entangled
                                                                : Verdict::Inconclusive;
    return r;
}

DetectionReport sum_squares_criterion(const DensityOperator& rho) {
    if (rho.dims.size() != 2 || rho.dims[0] != rho.dims[1]) {
        throw std::invalid_argument("sum_squares_criterion: bipartite equal dimensions required");
    }
    const ExtendedCorrelationTensor t = state_to_tensor(rho, Convention::QuditScaled);
    const std::size_t n = rho.dims[0] * rho.dims[0];
    DetectionReport r;
    ComplexMatrix gram(n - 1, n - 1);
    for (std::size_t p = 1; p < n; ++p) {
        for (std::size_t q = 1; q < n; ++q) {
            double s = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                s += t.at({i, p}) * t.at({i, q});
            }
            gram.at(p - 1, q - 1) = s;
        }
    }
    r.bound_used = std::sqrt(std::max(hermitian_eig(gram).eigenvalues[0], 0.0));
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) {
            const double v = t.at({i, j});
            if (v != 0.0) {
                r.terms.push_back({{i, j}, v * v});
                r.value += v * v;
            }
        }
    }
    r.verdict = r.value > r.bound_used + tol().detection_margin ? Verdict::Entangled
                                                                : Verdict::Inconclusive;
    return r;
}

DetectionReport bell_diagonal_criteria(const ExtendedCorrelationTensor& t) {
    if (t.dims != std::vector<std::size_t>{2, 2}) {
        throw std::invalid_argument("bell_diagonal_criteria: two-qubit tensor required");
    }
    if (t.values.size() != 16) {
        throw std::invalid_argument("bell_diagonal_criteria: incomplete tensor");
    }
    for (std::size_t i = 1; i < 4; ++i) {
        if (std::fabs(t.at({i, 0})) > tol().local_average ||
            std::fabs(t.at({0, i})) > tol().local_average) {
            throw std::invalid_argument("bell_diagonal_criteria: local averages must vanish");
        }
    }
    const double tx = t.at({1, 1});
    const double ty = t.at({2, 2});
    const double tz = t.at({3, 3});
    // sign patterns in Bell order phi+, phi-, psi+, psi-
    const double l[4] = {tx - ty + tz, -tx + ty + tz, tx + ty - tz, -tx - ty - tz};
    DetectionReport r;
    r.bound_used = 1.0;
    r.value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 4; ++j) {
        r.terms.push_back({{j + 1}, l[j]});
        r.value = std::max(r.value, l[j]);
    }
    r.terms.push_back({{}, std::fabs(tx) + std::fabs(ty) + std::fabs(tz)});
    r.verdict = r.value > r.bound_used + tol().detection_margin ? Verdict::Entangled
                                                                : Verdict::Inconclusive;
    return r;
}

double motivating_witness(const ExtendedCorrelationTensor& t) {
    if (t.dims != std::vector<std::size_t>{2, 2}) {
        throw std::invalid_argument("motivating_witness: two-qubit tensor required");
    }
    if (t.values.size() != 16) {
        throw std::invalid_argument("motivating_witness: incomplete tensor");
    }
    return t.at({1, 1}) + t.at({3, 3}) - t.at({3, 0}) + t.at({0, 3});
}

}  // namespace wk
