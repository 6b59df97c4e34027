#include "witnesskit/kernels.hpp"

namespace wk::kernels {

namespace {

void cdotc_scalar(const double* x, const double* y, std::size_t n, double out[2]) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    out[0] = re;
    out[1] = im;
}

void cdotu_scalar(const double* x, const double* y, std::size_t n, double out[2]) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr - xi * yi;
        im += xr * yi + xi * yr;
    }
    out[0] = re;
    out[1] = im;
}

void axpy_scalar(const double a[2], const double* x, double* y, std::size_t n) {
    const double ar = a[0], ai = a[1];
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        y[2 * i] += ar * xr - ai * xi;
        y[2 * i + 1] += ar * xi + ai * xr;
    }
}

void mix2_scalar(const double a[2], const double b[2], const double c[2], const double d[2],
                 double* u, double* v, std::size_t n) {
    const double ar = a[0], ai = a[1], br = b[0], bi = b[1];
    const double cr = c[0], ci = c[1], dr = d[0], di = d[1];
    for (std::size_t i = 0; i < n; ++i) {
        const double ur = u[2 * i], ui = u[2 * i + 1];
        const double vr = v[2 * i], vi = v[2 * i + 1];
        u[2 * i] = ar * ur - ai * ui + br * vr - bi * vi;
        u[2 * i + 1] = ar * ui + ai * ur + br * vi + bi * vr;
        v[2 * i] = cr * ur - ci * ui + dr * vr - di * vi;
        v[2 * i + 1] = cr * ui + ci * ur + dr * vi + di * vr;
    }
}

void sumsq_scalar(const double* x, std::size_t n, double* out) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        acc += x[i] * x[i];
    }
    *out = acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table = {cdotc_scalar, cdotu_scalar, axpy_scalar, mix2_scalar,
                              sumsq_scalar, "scalar"};
    return table;
}

}  // namespace wk::kernels
