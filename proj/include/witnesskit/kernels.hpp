#pragma once

#include <cstddef>

namespace wk::kernels {

// Low-level kernels over interleaved complex-double arrays (re, im, re, im, ...).
// n counts complex elements. All callers go through the dispatched table; the
// scalar table is exported for equivalence tests.
struct Ops {
    // out = sum_i conj(x_i) * y_i
    void (*cdotc)(const double* x, const double* y, std::size_t n, double out[2]);
    // out = sum_i x_i * y_i
    void (*cdotu)(const double* x, const double* y, std::size_t n, double out[2]);
    // y_i += a * x_i
    void (*axpy)(const double a[2], const double* x, double* y, std::size_t n);
    // (u_i, v_i) <- (a*u_i + b*v_i, c*u_i + d*v_i), applied simultaneously
    void (*mix2)(const double a[2], const double b[2], const double c[2], const double d[2],
                 double* u, double* v, std::size_t n);
    // sum of |x_i|^2
    void (*sumsq)(const double* x, std::size_t n, double* out);
    const char* name;
};

const Ops& scalar_ops();

// Active table, chosen once per process: AVX2+FMA when the CPU supports it,
// scalar otherwise. WITNESSKIT_SIMD={auto,scalar,avx2} forces a choice; forcing
// avx2 on an unsupported CPU throws std::runtime_error.
const Ops& ops();

bool avx2_supported();
const char* active_backend();

#if defined(WITNESSKIT_HAVE_AVX2)
const Ops& avx2_ops();
#endif

}  // namespace wk::kernels
