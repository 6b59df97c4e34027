#include "witnesskit/kernels.hpp"

#if defined(WITNESSKIT_HAVE_AVX2)

#include <immintrin.h>

namespace wk::kernels {

namespace {

// Lane layout: one __m256d holds two complex values [re0, im0, re1, im1].

inline __m256d swap_pairs(__m256d v) {
    return _mm256_permute_pd(v, 0b0101);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Horizontal sum with alternating signs: lane0 - lane1 + lane2 - lane3.
inline double hsum_alt(__m256d v) {
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    return hsum(_mm256_mul_pd(v, sign));
}

// a*b with complex semantics, a broadcast as (ar, ai): even lanes get
// ar*br - ai*bi, odd lanes ar*bi + ai*br.
inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d b) {
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, swap_pairs(b)));
}

void cdotc_avx2(const double* x, const double* y, std::size_t n, double out[2]) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(x + 2 * i);
        __m256d yv = _mm256_loadu_pd(y + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        acc_im = _mm256_fmadd_pd(xv, swap_pairs(yv), acc_im);
    }
    double re = hsum(acc_re);
    double im = hsum_alt(acc_im);
    for (; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    out[0] = re;
    out[1] = im;
}

void cdotu_avx2(const double* x, const double* y, std::size_t n, double out[2]) {
    __m256d acc_a = _mm256_setzero_pd();
    __m256d acc_b = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(x + 2 * i);
        __m256d yv = _mm256_loadu_pd(y + 2 * i);
        acc_a = _mm256_fmadd_pd(xv, yv, acc_a);
        acc_b = _mm256_fmadd_pd(xv, swap_pairs(yv), acc_b);
    }
    double re = hsum_alt(acc_a);
    double im = hsum(acc_b);
    for (; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr - xi * yi;
        im += xr * yi + xi * yr;
    }
    out[0] = re;
    out[1] = im;
}

void axpy_avx2(const double a[2], const double* x, double* y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a[0]);
    const __m256d ai = _mm256_set1_pd(a[1]);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(x + 2 * i);
        __m256d yv = _mm256_loadu_pd(y + 2 * i);
        _mm256_storeu_pd(y + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
    }
    for (; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        y[2 * i] += a[0] * xr - a[1] * xi;
        y[2 * i + 1] += a[0] * xi + a[1] * xr;
    }
}

void mix2_avx2(const double a[2], const double b[2], const double c[2], const double d[2],
               double* u, double* v, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a[0]), ai = _mm256_set1_pd(a[1]);
    const __m256d br = _mm256_set1_pd(b[0]), bi = _mm256_set1_pd(b[1]);
    const __m256d cr = _mm256_set1_pd(c[0]), ci = _mm256_set1_pd(c[1]);
    const __m256d dr = _mm256_set1_pd(d[0]), di = _mm256_set1_pd(d[1]);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d uv = _mm256_loadu_pd(u + 2 * i);
        __m256d vv = _mm256_loadu_pd(v + 2 * i);
        __m256d nu = _mm256_add_pd(cmul_bcast(ar, ai, uv), cmul_bcast(br, bi, vv));
        __m256d nv = _mm256_add_pd(cmul_bcast(cr, ci, uv), cmul_bcast(dr, di, vv));
        _mm256_storeu_pd(u + 2 * i, nu);
        _mm256_storeu_pd(v + 2 * i, nv);
    }
    if (i < n) {
        scalar_ops().mix2(a, b, c, d, u + 2 * i, v + 2 * i, n - i);
    }
}

void sumsq_avx2(const double* x, std::size_t n, double* out) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(x + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    double s = hsum(acc);
    for (std::size_t k = 2 * i; k < 2 * n; ++k) {
        s += x[k] * x[k];
    }
    *out = s;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops table = {cdotc_avx2, cdotu_avx2, axpy_avx2, mix2_avx2, sumsq_avx2, "avx2"};
    return table;
}

}  // namespace wk::kernels

#endif  // WITNESSKIT_HAVE_AVX2
