#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "astbench/calib.hpp"
#include "astbench/linalg.hpp"

namespace astbench {

enum class ModelKind {
    LinearLeastSquares,
    RegressionTree,
    GpRationalQuadratic,
    GpSquaredExponential,
    GpMatern52,
    GpExponential,
};

bool is_gp_kind(ModelKind kind);
std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name); // throws ConfigError

/// GP hyperparameters; unset fields are resolved by grid search at
/// training time.
struct GpHyper {
    std::optional<double> sigma_f2;
    std::optional<double> length_scale;
    std::optional<double> sigma_n2;
    double rq_alpha = 1.0; // rational-quadratic shape, fixed
};

struct TreeHyper {
    int max_depth = 12;
    int min_leaf = 4;
};

struct ModelSpec {
    ModelKind kind = ModelKind::GpExponential;
    GpHyper gp;
    TreeHyper tree;

    void validate() const;
};

/// Per-band affine feature standardisation plus the label mean removed
/// before GP fitting. Bands with zero spread keep scale 1.
struct Standardizer {
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    double label_mean = 0.0;

    std::vector<double> apply(const SpectrumFeatures& features) const;
};

struct LinearState {
    std::vector<double> weights; // standardized space
    double intercept = 0.0;
};

struct TreeNode {
    int feature = -1;      // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;    // leaf prediction
};

struct TreeState {
    std::vector<TreeNode> nodes; // node 0 is the root
};

/// Resolved GP: stored training inputs (standardized) and dual
/// coefficients alpha = (K + sigma_n2 I)^-1 (y - label_mean).
struct GpState {
    Matrix train_inputs;
    std::vector<double> alpha;
    double sigma_f2 = 1.0;
    double length_scale = 1.0;
    double sigma_n2 = 0.0;
    double rq_alpha = 1.0;
};

/// An immutable trained predictor. Prediction is deterministic and
/// clamped at zero (forces are non-negative).
class RegressionModel {
public:
    RegressionModel() = default;
    RegressionModel(ModelSpec spec, Standardizer std, LinearState state)
        : spec_(std::move(spec)), standardizer_(std::move(std)), state_(std::move(state)) {}
    RegressionModel(ModelSpec spec, Standardizer std, TreeState state)
        : spec_(std::move(spec)), standardizer_(std::move(std)), state_(std::move(state)) {}
    RegressionModel(ModelSpec spec, Standardizer std, GpState state)
        : spec_(std::move(spec)), standardizer_(std::move(std)), state_(std::move(state)) {}

    double predict(const SpectrumFeatures& features) const;

    const ModelSpec& spec() const { return spec_; }
    const Standardizer& standardizer() const { return standardizer_; }

    bool is_linear() const { return std::holds_alternative<LinearState>(state_); }
    bool is_tree() const { return std::holds_alternative<TreeState>(state_); }
    bool is_gp() const { return std::holds_alternative<GpState>(state_); }
    const LinearState& linear_state() const { return std::get<LinearState>(state_); }
    const TreeState& tree_state() const { return std::get<TreeState>(state_); }
    const GpState& gp_state() const { return std::get<GpState>(state_); }

    std::size_t feature_dim() const { return standardizer_.feature_mean.size(); }

    /// Linear weights mapped back to raw feature space.
    std::pair<std::vector<double>, double> linear_raw_weights() const;

private:
    ModelSpec spec_;
    Standardizer standardizer_;
    std::variant<LinearState, TreeState, GpState> state_;
};

/// Fits a model of the requested kind; features are standardized
/// internally, GP hyperparameters are grid-searched when unset.
RegressionModel train_model(const CalibrationDataset& train, const ModelSpec& spec);

double predict(const RegressionModel& model, const SpectrumFeatures& features);

/// Pooled k-fold cross-validation RMSE with a seeded fold assignment.
/// Repeated presses of one depth stay in the same fold, and the
/// shallowest/deepest levels always stay in training, so the score
/// measures interpolation to unseen indentations inside the calibrated
/// range; datasets without repeated depths fall back to per-sample folds.
double cross_validate(const CalibrationDataset& ds, const ModelSpec& spec, int k = 10,
                      std::uint64_t seed = 0);

struct RankingEntry {
    ModelSpec spec;
    double rmse = 0.0;
    bool ok = false;
    std::string error;
};

/// Cross-validates every spec (same seeded folds), returns the winner and
/// a ranking sorted by ascending RMSE; ties keep input order and failed
/// specs sink to the bottom with their error recorded.
std::pair<ModelSpec, std::vector<RankingEntry>> select_model(const CalibrationDataset& ds,
                                                             const std::vector<ModelSpec>& specs,
                                                             int k = 10, std::uint64_t seed = 0);

struct ToleranceReport {
    std::vector<double> thresholds; // N
    std::vector<double> pct_within; // %
    double mae = 0.0;
    double mae_std = 0.0;
    double rmse = 0.0;
};

/// Absolute-error tolerance table on a held-out set, thresholds
/// {0.5, 1.0, 1.5, 2.0} N.
ToleranceReport tolerance_report(const RegressionModel& model, const CalibrationDataset& test);

/// The six specs compared by the calibration pipeline, in ranking-table
/// order; the order also breaks RMSE ties.
std::vector<ModelSpec> default_model_specs();

} // namespace astbench
