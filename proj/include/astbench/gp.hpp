#pragma once

#include <cstddef>
#include <vector>

#include "astbench/linalg.hpp"
#include "astbench/model.hpp"

namespace astbench {

/// Fully resolved GP hyperparameters.
struct GpParams {
    double sigma_f2 = 1.0;
    double length_scale = 1.0;
    double sigma_n2 = 0.0;
    double rq_alpha = 1.0;
};

/// Stationary kernel value at distance r for the four GP families.
double gp_kernel_value(ModelKind kind, double r, const GpParams& p);

/// Euclidean distance between two points of dimension `dim`.
double point_distance(const double* a, const double* b, std::size_t dim);

/// Zero-mean GP regressor over whatever space the caller provides; no
/// standardisation, no clamping. The kernel system is solved with a
/// Cholesky factorisation, retrying once with 1e-10 diagonal jitter.
class GpRegressor {
public:
    void fit(Matrix inputs, const std::vector<double>& targets, ModelKind kind,
             const GpParams& params);

    double predict_mean(const double* x) const;
    double predict_mean(const std::vector<double>& x) const { return predict_mean(x.data()); }

    /// Predictive mean and variance (for hyperparameter scoring).
    std::pair<double, double> predict_mean_var(const double* x) const;

    const std::vector<double>& alpha() const { return alpha_; }
    const Matrix& inputs() const { return inputs_; }
    const GpParams& params() const { return params_; }

private:
    Matrix inputs_;
    Matrix chol_;
    std::vector<double> alpha_;
    ModelKind kind_ = ModelKind::GpExponential;
    GpParams params_;
};

/// Resolves unset GP hyperparameters by grid search: length scale over
/// {0.1, 1, 10, 100} times the median pairwise distance, signal variance
/// over {0.1, 1, 10} and noise variance over {1e-4, 1e-3, 1e-2} times the
/// target variance, scored by Gaussian log likelihood on a held-out fifth
/// of the (subsampled) data. Deterministic: the subsample and split use a
/// fixed internal seed, and ties keep the first grid point visited.
GpParams gp_resolve_hyperparameters(const Matrix& inputs, const std::vector<double>& targets,
                                    ModelKind kind, const GpHyper& requested);

} // namespace astbench
