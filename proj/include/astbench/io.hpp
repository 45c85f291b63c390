#pragma once

#include <filesystem>
#include <string>

#include "astbench/calib.hpp"
#include "astbench/model.hpp"
#include "astbench/trial.hpp"

namespace astbench {

inline constexpr int kFormatVersion = 1;

/// Formats a double as decimal text with 17 significant digits, enough
/// for an exact round-trip, independent of locale.
std::string format_double(double value);

/// Dataset CSV, header `subsection,depth_mm,force_n,f_000,...`; one row
/// per sample, newline terminated.
void write_dataset(const CalibrationDataset& ds, const std::filesystem::path& path);

/// Parses a dataset CSV; malformed headers or rows raise ParseError with
/// the 1-based line number.
CalibrationDataset read_dataset(const std::filesystem::path& path);

/// Model JSON with fields `format_version`, `spec`, `standardization`,
/// `state`. The loaded model predicts identically to the saved one.
void save_model(const RegressionModel& model, const std::filesystem::path& path);
RegressionModel load_model(const std::filesystem::path& path);

std::string model_to_json(const RegressionModel& model);
RegressionModel model_from_json(const std::string& text);

/// JSON-lines trial log: one `{t, phase, f_m, f_true, g_t}` object per
/// tick; an empty log writes an empty file.
void write_trial_log(const TrialLog& log, const std::filesystem::path& path);
TrialLog read_trial_log(const std::filesystem::path& path);

/// Campaign report JSON embedding the per-sample x per-trial MAE matrix.
void write_campaign_report(const CampaignReport& report, const std::filesystem::path& path);
CampaignReport read_campaign_report(const std::filesystem::path& path);

/// Strawberry sample CSV, header `id,weight_n,peduncle_diameter_mm`.
std::vector<StrawberrySample> read_samples_csv(const std::filesystem::path& path);

} // namespace astbench
