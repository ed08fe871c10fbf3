#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace qdimer::numerics {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Sized for this artifact's needs (2x2
// Pauli blocks, 4x4 states, 16x16 superoperators); not meant to scale.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

    static ComplexMatrix identity(int n);
    static ComplexMatrix diagonal(std::span<const Complex> entries);
    static ComplexMatrix diagonal(std::initializer_list<double> entries);

    int dim() const { return n_; }

    Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }

    std::span<const Complex> flat() const { return data_; }
    std::span<Complex> flat() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    Complex trace() const;
    double max_abs() const;             // entrywise max modulus
    double one_norm() const;            // max absolute column sum
    double hermiticity_defect() const;  // max |m - m^+| entrywise
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

private:
    int n_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal columns, vectors(i, k) = <i|v_k>
};

// Cyclic Jacobi diagonalization. Throws ContractViolation when the input
// fails the Hermiticity precondition max|m - m^+| > herm_tol.
HermitianEigen hermitian_eigen(const ComplexMatrix& m, double herm_tol = 1e-10);

// Eigenvalues of a general complex matrix via Hessenberg reduction and
// Wilkinson-shifted QR iteration. Order unspecified.
std::vector<Complex> general_eigenvalues(ComplexMatrix m);

// Matrix exponential by scaling and squaring around a degree-13 Pade core.
ComplexMatrix expm(const ComplexMatrix& m);

// Column-stacking convention: vec(m)[i + n*j] = m(i, j), so that
// vec(A X B) = (B^T (x) A) vec(X).
std::vector<Complex> vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(std::span<const Complex> v, int n);

} // namespace qdimer::numerics
