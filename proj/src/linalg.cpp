#include "qck/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qck {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = std::conj(at(i, j));
    return m;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double Matrix::hermiticity_residual() const {
    if (rows_ != cols_) return std::numeric_limits<double>::infinity();
    double r = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r = std::max(r, std::abs(at(i, j) - std::conj(at(j, i))));
    return r;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(Complex scalar) {
    for (auto& z : a_) z *= scalar;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex aik = a.at(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    return c;
}

Complex trace(const Matrix& m) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m.at(i, i);
    return t;
}

namespace {

// Cyclic Jacobi sweeps on a real symmetric matrix. a is n x n row-major and
// gets overwritten; v accumulates the rotations (columns are eigenvectors).
void jacobi_symmetric(std::vector<double>& a, std::size_t n, std::vector<double>& v,
                      double off_tol) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
        return s;
    };

    const double target = off_tol * off_tol;
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_norm2() <= target) return;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (apq == 0.0) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm2() > target) throw std::runtime_error("Jacobi iteration did not converge");
}

}  // namespace

EigenSystem hermitian_eigen(const Matrix& m, double off_tol_rel) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("matrix not square");

    double fro = 0.0;
    double max_imag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            fro += std::norm(m.at(i, j));
            max_imag = std::max(max_imag, std::abs(m.at(i, j).imag()));
        }
    fro = std::sqrt(fro);
    const double off_tol = off_tol_rel * std::max(fro, 1e-300);

    EigenSystem out;
    if (max_imag == 0.0) {
        std::vector<double> a(n * n), v;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m.at(i, j).real();
        jacobi_symmetric(a, n, v, off_tol);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
        for (std::size_t k : order) {
            out.values.push_back(a[k * n + k]);
            std::vector<Complex> vec(n);
            for (std::size_t i = 0; i < n; ++i) vec[i] = v[i * n + k];
            out.vectors.push_back(std::move(vec));
        }
        return out;
    }

    // Standard embedding H = A + iB  ->  [[A, -B], [B, A]], real symmetric of
    // doubled size; every eigenvalue shows up twice.
    const std::size_t N = 2 * n;
    std::vector<double> a(N * N), v;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double re = m.at(i, j).real(), im = m.at(i, j).imag();
            a[i * N + j] = re;
            a[(i + n) * N + (j + n)] = re;
            a[i * N + (j + n)] = -im;
            a[(i + n) * N + j] = im;
        }
    jacobi_symmetric(a, N, v, off_tol);

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x * N + x] < a[y * N + y]; });
    // Keep one representative of each duplicated pair.
    for (std::size_t t = 0; t < N; t += 2) {
        std::size_t k = order[t];
        out.values.push_back(a[k * N + k]);
        std::vector<Complex> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = Complex(v[i * N + k], v[(i + n) * N + k]);
        double norm = 0.0;
        for (const auto& z : vec) norm += std::norm(z);
        norm = std::sqrt(norm);
        for (auto& z : vec) z /= norm;
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

}  // namespace qck
