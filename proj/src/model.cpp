#include "astbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <string>
#include <unordered_map>

#include "astbench/errors.hpp"
#include "astbench/gp.hpp"
#include "astbench/rng.hpp"
#include "astbench/tree.hpp"

namespace astbench {

namespace {

struct DesignData {
    Matrix inputs; // n x B, raw
    std::vector<double> targets;
};

DesignData to_design(const CalibrationDataset& ds) {
    const std::size_t n = ds.size();
    const std::size_t dim = ds.feature_dim();
    DesignData d{Matrix(n, dim), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = ds.samples[i];
        std::copy(s.features.bands.begin(), s.features.bands.end(), d.inputs.row(i));
        d.targets[i] = s.force_n;
    }
    return d;
}

Standardizer make_standardizer(const DesignData& d) {
    const std::size_t n = d.inputs.rows();
    const std::size_t dim = d.inputs.cols();
    Standardizer st;
    st.feature_mean.assign(dim, 0.0);
    st.feature_scale.assign(dim, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) st.feature_mean[j] += d.inputs(i, j);
    for (double& m : st.feature_mean) m /= static_cast<double>(n);
    for (std::size_t j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = d.inputs(i, j) - st.feature_mean[j];
            acc += diff * diff;
        }
        const double sd = std::sqrt(acc / static_cast<double>(n));
        st.feature_scale[j] = sd > 1e-12 ? sd : 1.0;
    }
    st.label_mean = std::accumulate(d.targets.begin(), d.targets.end(), 0.0) /
                    static_cast<double>(n);
    return st;
}

Matrix standardize_inputs(const DesignData& d, const Standardizer& st) {
    Matrix z(d.inputs.rows(), d.inputs.cols());
    for (std::size_t i = 0; i < d.inputs.rows(); ++i)
        for (std::size_t j = 0; j < d.inputs.cols(); ++j)
            z(i, j) = (d.inputs(i, j) - st.feature_mean[j]) / st.feature_scale[j];
    return z;
}

LinearState fit_linear(const Matrix& z, const std::vector<double>& y) {
    const std::size_t n = z.rows();
    const std::size_t dim = z.cols();
    const std::size_t m = dim + 1; // plus intercept
    Matrix gram(m, m, 0.0);
    std::vector<double> rhs(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* zi = z.row(i);
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a; b < dim; ++b) gram(a, b) += zi[a] * zi[b];
            gram(a, dim) += zi[a];
            rhs[a] += zi[a] * y[i];
        }
        gram(dim, dim) += 1.0;
        rhs[dim] += y[i];
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);
    const std::vector<double> beta = solve_spd(std::move(gram), rhs);
    LinearState state;
    state.weights.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(dim));
    state.intercept = beta[dim];
    return state;
}

} // namespace

bool is_gp_kind(ModelKind kind) {
    switch (kind) {
        case ModelKind::GpRationalQuadratic:
        case ModelKind::GpSquaredExponential:
        case ModelKind::GpMatern52:
        case ModelKind::GpExponential:
            return true;
        default:
            return false;
    }
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::LinearLeastSquares: return "linear-least-squares";
        case ModelKind::RegressionTree: return "regression-tree";
        case ModelKind::GpRationalQuadratic: return "gp-rational-quadratic";
        case ModelKind::GpSquaredExponential: return "gp-squared-exponential";
        case ModelKind::GpMatern52: return "gp-matern-5/2";
        case ModelKind::GpExponential: return "gp-exponential";
    }
    throw DomainError("unknown model kind");
}

ModelKind parse_model_kind(const std::string& name) {
    static const std::pair<const char*, ModelKind> table[] = {
        {"linear-least-squares", ModelKind::LinearLeastSquares},
        {"regression-tree", ModelKind::RegressionTree},
        {"gp-rational-quadratic", ModelKind::GpRationalQuadratic},
        {"gp-squared-exponential", ModelKind::GpSquaredExponential},
        {"gp-matern-5/2", ModelKind::GpMatern52},
        {"gp-exponential", ModelKind::GpExponential},
    };
    for (const auto& [key, kind] : table)
        if (name == key) return kind;
    throw ConfigError("unknown model kind '" + name + "'");
}

void ModelSpec::validate() const {
    if (kind == ModelKind::RegressionTree) {
        if (tree.max_depth < 1) throw ConfigError("tree max_depth must be at least 1");
        if (tree.min_leaf < 1) throw ConfigError("tree min_leaf must be at least 1");
    }
    if (is_gp_kind(kind)) {
        if (gp.sigma_f2 && !(*gp.sigma_f2 > 0.0))
            throw ConfigError("gp sigma_f2 must be positive");
        if (gp.length_scale && !(*gp.length_scale > 0.0))
            throw ConfigError("gp length_scale must be positive");
        if (gp.sigma_n2 && *gp.sigma_n2 < 0.0)
            throw ConfigError("gp sigma_n2 must be non-negative");
        if (!(gp.rq_alpha > 0.0)) throw ConfigError("gp rq_alpha must be positive");
    }
}

std::vector<double> Standardizer::apply(const SpectrumFeatures& features) const {
    if (features.size() != feature_mean.size())
        throw ShapeError("feature length " + std::to_string(features.size()) +
                         " does not match model dimension " +
                         std::to_string(feature_mean.size()));
    std::vector<double> z(features.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        z[j] = (features[j] - feature_mean[j]) / feature_scale[j];
    return z;
}

RegressionModel train_model(const CalibrationDataset& train, const ModelSpec& spec) {
    train.validate();
    spec.validate();
    const DesignData design = to_design(train);
    const Standardizer st = make_standardizer(design);
    const Matrix z = standardize_inputs(design, st);

    if (spec.kind == ModelKind::LinearLeastSquares)
        return {spec, st, fit_linear(z, design.targets)};
    if (spec.kind == ModelKind::RegressionTree)
        return {spec, st, build_regression_tree(z, design.targets, spec.tree)};

    std::vector<double> centered(design.targets.size());
    for (std::size_t i = 0; i < centered.size(); ++i)
        centered[i] = design.targets[i] - st.label_mean;
    const GpParams params = gp_resolve_hyperparameters(z, centered, spec.kind, spec.gp);
    GpRegressor gp;
    gp.fit(z, centered, spec.kind, params);

    GpState state;
    state.train_inputs = gp.inputs();
    state.alpha = gp.alpha();
    state.sigma_f2 = params.sigma_f2;
    state.length_scale = params.length_scale;
    state.sigma_n2 = params.sigma_n2;
    state.rq_alpha = params.rq_alpha;
    ModelSpec resolved = spec;
    resolved.gp.sigma_f2 = params.sigma_f2;
    resolved.gp.length_scale = params.length_scale;
    resolved.gp.sigma_n2 = params.sigma_n2;
    return {resolved, st, std::move(state)};
}

double RegressionModel::predict(const SpectrumFeatures& features) const {
    const std::vector<double> z = standardizer_.apply(features);
    double value = 0.0;
    if (const auto* lin = std::get_if<LinearState>(&state_)) {
        value = lin->intercept;
        for (std::size_t j = 0; j < z.size(); ++j) value += lin->weights[j] * z[j];
    } else if (const auto* tree = std::get_if<TreeState>(&state_)) {
        value = tree_predict(*tree, z.data());
    } else {
        const auto& gp = std::get<GpState>(state_);
        GpParams params{gp.sigma_f2, gp.length_scale, gp.sigma_n2, gp.rq_alpha};
        double acc = 0.0;
        for (std::size_t i = 0; i < gp.train_inputs.rows(); ++i) {
            const double r = point_distance(z.data(), gp.train_inputs.row(i), z.size());
            acc += gp.alpha[i] * gp_kernel_value(spec_.kind, r, params);
        }
        value = standardizer_.label_mean + acc;
    }
    return std::max(0.0, value);
}

std::pair<std::vector<double>, double> RegressionModel::linear_raw_weights() const {
    const auto& lin = linear_state();
    std::vector<double> raw(lin.weights.size());
    double intercept = lin.intercept;
    for (std::size_t j = 0; j < raw.size(); ++j) {
        raw[j] = lin.weights[j] / standardizer_.feature_scale[j];
        intercept -= lin.weights[j] * standardizer_.feature_mean[j] /
                     standardizer_.feature_scale[j];
    }
    return {std::move(raw), intercept};
}

double predict(const RegressionModel& model, const SpectrumFeatures& features) {
    return model.predict(features);
}

double cross_validate(const CalibrationDataset& ds, const ModelSpec& spec, int k,
                      std::uint64_t seed) {
    ds.validate();
    const std::size_t n = ds.size();
    if (k < 2) throw DatasetError("cross-validation needs at least 2 folds");
    if (static_cast<std::size_t>(k) > n)
        throw DatasetError("fold count " + std::to_string(k) + " exceeds dataset size " +
                           std::to_string(n));

    // Samples sharing a press depth are repeated measurements of the same
    // indentation, so they stay in one fold: validation then measures how
    // a model generalises to depths it never saw, which is how the trial
    // harness consumes it. The shallowest and deepest sweep levels bound
    // the calibrated range and always stay in training; predictions
    // outside that range are not part of the model's contract. Datasets
    // without repeated depths degrade to plain per-sample folds.
    std::unordered_map<double, std::size_t> depth_group;
    std::vector<std::size_t> group_of(n);
    double depth_min = ds.samples[0].depth_mm;
    double depth_max = ds.samples[0].depth_mm;
    for (std::size_t i = 0; i < n; ++i) {
        const double depth = ds.samples[i].depth_mm;
        group_of[i] = depth_group.try_emplace(depth, depth_group.size()).first->second;
        depth_min = std::min(depth_min, depth);
        depth_max = std::max(depth_max, depth);
    }

    std::vector<int> fold_of_group; // -1: anchor level, never held out
    Rng rng(seed);
    if (depth_group.size() >= 4) {
        fold_of_group.assign(depth_group.size(), -1);
        std::vector<std::size_t> movable;
        for (const auto& [depth, g] : depth_group)
            if (depth != depth_min && depth != depth_max) movable.push_back(g);
        std::sort(movable.begin(), movable.end()); // hash-map order is not deterministic
        for (std::size_t i = movable.size() - 1; i > 0; --i)
            std::swap(movable[i], movable[rng.below(i + 1)]);
        for (std::size_t p = 0; p < movable.size(); ++p)
            fold_of_group[movable[p]] = static_cast<int>(p % static_cast<std::size_t>(k));
    } else {
        // Too few depth levels to group: one sample per group.
        std::iota(group_of.begin(), group_of.end(), 0);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
        fold_of_group.resize(n);
        for (std::size_t p = 0; p < n; ++p)
            fold_of_group[order[p]] = static_cast<int>(p % static_cast<std::size_t>(k));
    }

    double sq_sum = 0.0;
    std::size_t tested = 0;
    for (int fold = 0; fold < k; ++fold) {
        CalibrationDataset train, test;
        train.provenance = ds.provenance;
        test.provenance = ds.provenance;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& sample = ds.samples[i];
            (fold_of_group[group_of[i]] == fold ? test : train).samples.push_back(sample);
        }
        if (test.samples.empty()) continue; // fewer groups than folds
        const RegressionModel model = train_model(train, spec);
        for (const auto& sample : test.samples) {
            const double diff = model.predict(sample.features) - sample.force_n;
            sq_sum += diff * diff;
        }
        tested += test.samples.size();
    }
    if (tested == 0) throw DatasetError("cross-validation produced no held-out samples");
    return std::sqrt(sq_sum / static_cast<double>(tested));
}

std::pair<ModelSpec, std::vector<RankingEntry>> select_model(const CalibrationDataset& ds,
                                                             const std::vector<ModelSpec>& specs,
                                                             int k, std::uint64_t seed) {
    if (specs.empty()) throw TrainingError("no model specs to select from");
    // Each spec's cross-validation touches only its own state, so the
    // specs run concurrently; the ranking is assembled in input order.
    std::vector<std::future<RankingEntry>> futures;
    futures.reserve(specs.size());
    for (const ModelSpec& spec : specs)
        futures.push_back(std::async(std::launch::async, [&ds, spec, k, seed] {
            RankingEntry entry;
            entry.spec = spec;
            try {
                entry.rmse = cross_validate(ds, spec, k, seed);
                entry.ok = true;
            } catch (const Error& e) {
                entry.error = e.what();
            }
            return entry;
        }));
    std::vector<RankingEntry> ranking;
    ranking.reserve(specs.size());
    for (auto& future : futures) ranking.push_back(future.get());
    std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        if (a.ok != b.ok) return a.ok;
        return a.ok && a.rmse < b.rmse;
    });
    if (!ranking.front().ok)
        throw TrainingError("every model spec failed: " + ranking.front().error);
    return {ranking.front().spec, std::move(ranking)};
}

ToleranceReport tolerance_report(const RegressionModel& model, const CalibrationDataset& test) {
    test.validate();
    ToleranceReport report;
    report.thresholds = {0.5, 1.0, 1.5, 2.0};
    const std::size_t n = test.size();
    std::vector<double> abs_err(n);
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = model.predict(test.samples[i].features) - test.samples[i].force_n;
        abs_err[i] = std::abs(diff);
        sq_sum += diff * diff;
    }
    report.pct_within.reserve(report.thresholds.size());
    for (double thr : report.thresholds) {
        const auto cnt = std::count_if(abs_err.begin(), abs_err.end(),
                                       [thr](double e) { return e <= thr; });
        report.pct_within.push_back(100.0 * static_cast<double>(cnt) /
                                    static_cast<double>(n));
    }
    report.mae = std::accumulate(abs_err.begin(), abs_err.end(), 0.0) /
                 static_cast<double>(n);
    double var = 0.0;
    for (double e : abs_err) var += (e - report.mae) * (e - report.mae);
    report.mae_std = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    report.rmse = std::sqrt(sq_sum / static_cast<double>(n));
    return report;
}

std::vector<ModelSpec> default_model_specs() {
    std::vector<ModelSpec> specs;
    for (ModelKind kind : {ModelKind::LinearLeastSquares, ModelKind::RegressionTree,
                           ModelKind::GpRationalQuadratic, ModelKind::GpSquaredExponential,
                           ModelKind::GpMatern52, ModelKind::GpExponential}) {
        ModelSpec spec;
        spec.kind = kind;
        specs.push_back(spec);
    }
    return specs;
}

} // namespace astbench
