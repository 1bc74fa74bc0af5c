#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qck {

using Complex = std::complex<double>;

// Dense complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Matrix adjoint() const;
    double max_abs() const;
    // max entry of |M - M^dagger|; zero for exactly Hermitian input.
    double hermiticity_residual() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator*=(Complex scalar);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
Complex trace(const Matrix& m);

struct EigenSystem {
    std::vector<double> values;        // ascending
    std::vector<std::vector<Complex>> vectors;  // unit eigenvectors, values[i] <-> vectors[i]
};

// Cyclic Jacobi on the real symmetric embedding of a Hermitian matrix
// (real input skips the embedding). Converges until the off-diagonal
// Frobenius mass drops below off_tol_rel times the matrix norm.
EigenSystem hermitian_eigen(const Matrix& m, double off_tol_rel = 1e-13);

}  // namespace qck
