#include "astbench/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "astbench/errors.hpp"
#include "astbench/rng.hpp"

namespace astbench {

namespace {

constexpr double kJitter = 1e-10;
// Grid search subsample cap; keeps hyperparameter fitting O(cap^3) even
// inside cross-validation folds.
constexpr std::size_t kGridSubsampleCap = 480;
constexpr std::uint64_t kGridSeed = 0x9E3779B97F4A7C15ULL;

Matrix pairwise_distances(const Matrix& points) {
    const std::size_t n = points.rows();
    Matrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = point_distance(points.row(i), points.row(j), points.cols());
            d(i, j) = r;
            d(j, i) = r;
        }
    return d;
}

double population_variance(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(values.size());
}

} // namespace

double point_distance(const double* a, const double* b, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

double gp_kernel_value(ModelKind kind, double r, const GpParams& p) {
    const double l = p.length_scale;
    switch (kind) {
        case ModelKind::GpExponential:
            return p.sigma_f2 * std::exp(-r / l);
        case ModelKind::GpSquaredExponential:
            return p.sigma_f2 * std::exp(-(r * r) / (2.0 * l * l));
        case ModelKind::GpMatern52: {
            const double t = std::sqrt(5.0) * r / l;
            return p.sigma_f2 * (1.0 + t + t * t / 3.0) * std::exp(-t);
        }
        case ModelKind::GpRationalQuadratic:
            return p.sigma_f2 *
                   std::pow(1.0 + (r * r) / (2.0 * p.rq_alpha * l * l), -p.rq_alpha);
        default:
            throw DomainError("not a GP kernel kind: " + model_kind_name(kind));
    }
}

void GpRegressor::fit(Matrix inputs, const std::vector<double>& targets, ModelKind kind,
                      const GpParams& params) {
    const std::size_t n = inputs.rows();
    if (n == 0) throw DatasetError("GP fit needs at least one point");
    if (targets.size() != n) throw ShapeError("GP targets do not match input rows");
    if (!(params.length_scale > 0.0) || !(params.sigma_f2 > 0.0) || params.sigma_n2 < 0.0)
        throw ConfigError("GP hyperparameters out of range");

    kind_ = kind;
    params_ = params;
    inputs_ = std::move(inputs);

    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double r =
                i == j ? 0.0 : point_distance(inputs_.row(i), inputs_.row(j), inputs_.cols());
            const double v = gp_kernel_value(kind_, r, params_);
            k(i, j) = v;
            k(j, i) = v;
        }
        k(i, i) += params_.sigma_n2;
    }

    chol_ = k;
    if (!cholesky_factor(chol_)) {
        chol_ = k;
        for (std::size_t i = 0; i < n; ++i) chol_(i, i) += kJitter;
        if (!cholesky_factor(chol_))
            throw NumericalError("GP kernel matrix singular after jitter");
    }
    alpha_ = cholesky_solve(chol_, targets);
}

double GpRegressor::predict_mean(const double* x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < inputs_.rows(); ++i) {
        const double r = point_distance(x, inputs_.row(i), inputs_.cols());
        acc += alpha_[i] * gp_kernel_value(kind_, r, params_);
    }
    return acc;
}

std::pair<double, double> GpRegressor::predict_mean_var(const double* x) const {
    const std::size_t n = inputs_.rows();
    std::vector<double> kstar(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = point_distance(x, inputs_.row(i), inputs_.cols());
        kstar[i] = gp_kernel_value(kind_, r, params_);
        mean += alpha_[i] * kstar[i];
    }
    const std::vector<double> v = forward_substitute(chol_, kstar);
    double quad = 0.0;
    for (double vi : v) quad += vi * vi;
    const double prior = gp_kernel_value(kind_, 0.0, params_);
    const double var = std::max(prior - quad, 1e-12);
    return {mean, var};
}

GpParams gp_resolve_hyperparameters(const Matrix& inputs, const std::vector<double>& targets,
                                    ModelKind kind, const GpHyper& requested) {
    GpParams resolved;
    resolved.rq_alpha = requested.rq_alpha;
    const bool need_search =
        !requested.sigma_f2 || !requested.length_scale || !requested.sigma_n2;

    const std::size_t n = inputs.rows();

    // Subsample once, deterministically.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(kGridSeed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    const std::size_t sub_n = std::min(n, kGridSubsampleCap);

    // Hold out whole target-value groups for scoring: repeated presses of
    // one depth share an exact label, and the useful question is how well
    // a candidate predicts depths it has not seen. The extreme target
    // values bound the calibrated range and stay on the fit side.
    // Continuous targets make every row its own group, a plain row split.
    std::unordered_map<double, std::size_t> value_group;
    std::vector<std::size_t> group_of(sub_n);
    double target_min = targets[order[0]];
    double target_max = targets[order[0]];
    for (std::size_t p = 0; p < sub_n; ++p) {
        const double value = targets[order[p]];
        group_of[p] = value_group.try_emplace(value, value_group.size()).first->second;
        target_min = std::min(target_min, value);
        target_max = std::max(target_max, value);
    }
    const std::size_t n_groups = value_group.size();

    std::vector<std::size_t> fit_rows, val_rows;
    if (n_groups >= 4) {
        std::vector<char> group_held(n_groups, 0);
        const std::size_t val_target = std::max<std::size_t>(1, (n_groups - 2 + 4) / 5);
        std::size_t val_count = 0;
        for (std::size_t p = 0; p < sub_n && val_count < val_target; ++p) {
            const double value = targets[order[p]];
            const std::size_t g = group_of[p];
            if (!group_held[g] && value != target_min && value != target_max) {
                group_held[g] = 1;
                ++val_count;
            }
        }
        for (std::size_t p = 0; p < sub_n; ++p)
            (group_held[group_of[p]] ? val_rows : fit_rows).push_back(order[p]);
    } else if (sub_n >= 5) {
        // Too few distinct targets to group; hold out the last fifth of rows.
        const std::size_t val_n = std::max<std::size_t>(1, sub_n / 5);
        fit_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(sub_n - val_n));
        val_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(sub_n - val_n),
                        order.begin() + static_cast<std::ptrdiff_t>(sub_n));
    }
    const std::size_t fit_n = fit_rows.size();
    const std::size_t val_n = val_rows.size();

    // Degenerate inputs: too few points to score a held-out fold. Fall
    // back to scale heuristics; any interpolating choice predicts the
    // training targets regardless.
    const double var_y = std::max(population_variance(targets), 1e-12);
    if (!need_search || fit_n < 2 || val_n == 0) {
        resolved.sigma_f2 = requested.sigma_f2.value_or(var_y);
        resolved.length_scale = requested.length_scale.value_or(1.0);
        resolved.sigma_n2 = requested.sigma_n2.value_or(1e-6 * var_y);
        return resolved;
    }

    Matrix fit_x(fit_n, inputs.cols());
    std::vector<double> fit_y(fit_n);
    Matrix val_x(val_n, inputs.cols());
    std::vector<double> val_y(val_n);
    for (std::size_t i = 0; i < fit_n; ++i) {
        const std::size_t src = fit_rows[i];
        std::copy(inputs.row(src), inputs.row(src) + inputs.cols(), fit_x.row(i));
        fit_y[i] = targets[src];
    }
    for (std::size_t i = 0; i < val_n; ++i) {
        const std::size_t src = val_rows[i];
        std::copy(inputs.row(src), inputs.row(src) + inputs.cols(), val_x.row(i));
        val_y[i] = targets[src];
    }

    // Median pairwise distance on the fit subset anchors the length grid.
    const Matrix dist = pairwise_distances(fit_x);
    std::vector<double> offdiag;
    offdiag.reserve(fit_n * (fit_n - 1) / 2);
    for (std::size_t i = 0; i < fit_n; ++i)
        for (std::size_t j = i + 1; j < fit_n; ++j) offdiag.push_back(dist(i, j));
    double median = 1.0;
    if (!offdiag.empty()) {
        std::nth_element(offdiag.begin(), offdiag.begin() + offdiag.size() / 2, offdiag.end());
        median = offdiag[offdiag.size() / 2];
        if (!(median > 0.0)) median = 1.0;
    }

    const double fit_var = std::max(population_variance(fit_y), 1e-12);
    std::vector<double> length_grid, sf2_grid, sn2_grid;
    if (requested.length_scale) {
        length_grid = {*requested.length_scale};
    } else {
        for (double m : {0.1, 1.0, 10.0, 100.0}) length_grid.push_back(m * median);
    }
    if (requested.sigma_f2) {
        sf2_grid = {*requested.sigma_f2};
    } else {
        for (double m : {0.1, 1.0, 10.0}) sf2_grid.push_back(m * fit_var);
    }
    if (requested.sigma_n2) {
        sn2_grid = {*requested.sigma_n2};
    } else {
        for (double m : {1e-4, 1e-3, 1e-2}) sn2_grid.push_back(m * fit_var);
    }

    double best_ll = -std::numeric_limits<double>::infinity();
    bool found = false;
    GpParams best;
    for (double l : length_grid) {
        for (double sf2 : sf2_grid) {
            for (double sn2 : sn2_grid) {
                GpParams candidate{sf2, l, sn2, requested.rq_alpha};
                GpRegressor gp;
                try {
                    gp.fit(fit_x, fit_y, kind, candidate);
                } catch (const NumericalError&) {
                    continue;
                }
                double ll = 0.0;
                for (std::size_t i = 0; i < val_n; ++i) {
                    const auto [mean, var] = gp.predict_mean_var(val_x.row(i));
                    const double s2 = var + candidate.sigma_n2;
                    const double diff = val_y[i] - mean;
                    ll += -0.5 * (diff * diff / s2 + std::log(2.0 * std::numbers::pi * s2));
                }
                if (ll > best_ll) {
                    best_ll = ll;
                    best = candidate;
                    found = true;
                }
            }
        }
    }
    if (!found) throw NumericalError("every GP hyperparameter candidate failed to factorise");
    return best;
}

} // namespace astbench
