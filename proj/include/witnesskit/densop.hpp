#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace wk {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Small sizes only (side <= 100); storage is
// interleaved (re, im) doubles underneath, which is what the kernels layer
// consumes directly.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    cplx& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static ComplexMatrix identity(std::size_t n);
};

// std::complex<double> is layout-compatible with double[2].
inline double* flat(ComplexMatrix& m) { return reinterpret_cast<double*>(m.data.data()); }
inline const double* flat(const ComplexMatrix& m) {
    return reinterpret_cast<const double*>(m.data.data());
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& m);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& m);
std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& v);

cplx trace(const ComplexMatrix& m);
double frobenius(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double eps);

// Hilbert-Schmidt inner product Tr(a.b) for Hermitian a, b of equal shape.
// Throws std::invalid_argument on shape mismatch.
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// A state: square matrix plus the list of local dimensions that factor it.
struct DensityOperator {
    ComplexMatrix matrix;
    std::vector<std::size_t> dims;

    std::size_t dim() const { return matrix.rows; }
};

// Validates shape, dims (each >= 2, product = side), Hermiticity, unit trace
// and (unless check_psd is false) positive semidefiniteness down to the
// configured eigenvalue floor. Throws std::invalid_argument on violation.
DensityOperator make_density(ComplexMatrix m, std::vector<std::size_t> dims,
                             bool check_psd = true);

// Kronecker product, (a (x) b)[(i*rb+k),(j*cb+l)] = a[i,j]*b[k,l]; party 0 is
// the most significant index block everywhere in this library.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Transposes the indices of one subsystem. Throws std::out_of_range on a bad
// party index, std::invalid_argument if dims do not factor the matrix.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                std::size_t party);
ComplexMatrix partial_transpose(const DensityOperator& rho, std::size_t party);

// Traces out every party not listed in keep. keep is treated as a set: it is
// sorted ascending, must be nonempty, unique and in range.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            std::vector<std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::vector<std::size_t> keep);

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // orthonormal columns, column k pairs with eigenvalues[k]
};

// Cyclic complex Jacobi. Requires Hermitian input (gate 1e-8, central record).
// Deterministic output: eigenvalues descending, each vector's first component
// above 1e-12 made real positive, exact ties ordered lexicographically.
Spectrum hermitian_eig(const ComplexMatrix& m);

// Smallest eigenvalue >= floor. Default floor is the central psd_floor.
bool is_psd(const ComplexMatrix& m);
bool is_psd(const ComplexMatrix& m, double floor);

// Matrix JSON: {"dims":[..], "re":[[..],..], "im":[[..],..]}, row-major, both
// parts required.
std::string density_to_json(const DensityOperator& rho, bool pretty = false);
DensityOperator density_from_json(const std::string& text, bool check_psd = true);

}  // namespace wk
