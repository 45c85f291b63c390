#include "astbench/linalg.hpp"

#include <cmath>

#include "astbench/errors.hpp"

namespace astbench {

bool cholesky_factor(Matrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double* aj = a.row(j);
        double diag = aj[j];
        for (std::size_t k = 0; k < j; ++k) diag -= aj[k] * aj[k];
        if (!(diag > 0.0) || !std::isfinite(diag)) return false;
        const double ljj = std::sqrt(diag);
        aj[j] = ljj;
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double* ai = a.row(i);
            double s = ai[j];
            for (std::size_t k = 0; k < j; ++k) s -= ai[k] * aj[k];
            ai[j] = s * inv;
        }
    }
    // Zero the strict upper triangle so the factor is self-describing.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
    return true;
}

std::vector<double> forward_substitute(const Matrix& chol, const std::vector<double>& b) {
    const std::size_t n = chol.rows();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* li = chol.row(i);
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
        y[i] = s / li[i];
    }
    return y;
}

std::vector<double> cholesky_solve(const Matrix& chol, const std::vector<double>& b) {
    const std::size_t n = chol.rows();
    std::vector<double> x = forward_substitute(chol, b);
    // Back substitution with Lᵀ.
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= chol(k, ii) * x[k];
        x[ii] = s / chol(ii, ii);
    }
    return x;
}

std::vector<double> solve_spd(Matrix a, const std::vector<double>& b, double jitter) {
    Matrix attempt = a;
    if (cholesky_factor(attempt)) return cholesky_solve(attempt, b);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += jitter;
    if (!cholesky_factor(a))
        throw NumericalError("linear system singular after diagonal jitter");
    return cholesky_solve(a, b);
}

} // namespace astbench
