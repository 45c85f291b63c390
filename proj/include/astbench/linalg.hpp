#pragma once

#include <cstddef>
#include <vector>

namespace astbench {

/// Dense row-major matrix; just enough linear algebra for the
/// regression models (Cholesky solves on small symmetric systems).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// In-place lower Cholesky factorisation A = L·Lᵀ of a symmetric matrix.
/// Returns false (leaving the factor partially written) when A is not
/// numerically positive definite.
bool cholesky_factor(Matrix& a);

/// Solves L·Lᵀ x = b given the lower factor from cholesky_factor.
std::vector<double> cholesky_solve(const Matrix& chol, const std::vector<double>& b);

/// Forward substitution: solves L y = b.
std::vector<double> forward_substitute(const Matrix& chol, const std::vector<double>& b);

/// Solves the symmetric positive-definite system A x = b, retrying once
/// with `jitter` added to the diagonal. Throws NumericalError if the
/// system is still singular after the jitter.
std::vector<double> solve_spd(Matrix a, const std::vector<double>& b, double jitter = 1e-10);

} // namespace astbench
