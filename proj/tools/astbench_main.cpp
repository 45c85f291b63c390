#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "astbench/config.hpp"
#include "astbench/errors.hpp"
#include "astbench/io.hpp"
#include "astbench/model.hpp"
#include "astbench/rng.hpp"
#include "astbench/trial.hpp"

namespace fs = std::filesystem;
using namespace astbench;

namespace {

// Exit codes: 2 configuration, 3 sweep protocol, 4 training, 5 safety abort.
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitTraining = 4;
constexpr int kExitAbort = 5;

// Seed streams per pipeline stage, derived from the master seed.
constexpr std::uint64_t kStreamDataset = 1;
constexpr std::uint64_t kStreamSplit = 2;
constexpr std::uint64_t kStreamFolds = 3;
constexpr std::uint64_t kStreamCampaign = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

WorkbenchConfig resolve_config(const CommonOpts& opts) {
    WorkbenchConfig cfg;
    if (!opts.config_path.empty()) cfg = load_workbench_config(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    cfg.trial.seed = cfg.seed;
    cfg.attenuation.rng_seed = cfg.seed;
    cfg.validate();
    return cfg;
}

fs::path ensure_out_dir(const CommonOpts& opts) {
    fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string());
    return dir;
}

int cmd_calibrate_generate(const CommonOpts& opts, int repeats_override) {
    WorkbenchConfig cfg = resolve_config(opts);
    if (repeats_override > 0) cfg.protocol.repeats = repeats_override;
    cfg.validate();
    const SkinSimulator sim = cfg.make_simulator();
    const CalibrationDataset ds =
        generate_dataset(cfg.protocol, sim, derive_seed(cfg.seed, kStreamDataset));
    const fs::path out = ensure_out_dir(opts) / "dataset.csv";
    write_dataset(ds, out);
    std::printf("wrote %zu samples to %s\n", ds.size(), out.string().c_str());
    return 0;
}

std::vector<ModelSpec> specs_from_names(const std::string& names) {
    if (names.empty()) return default_model_specs();
    std::vector<ModelSpec> specs;
    std::string::size_type start = 0;
    while (start <= names.size()) {
        auto pos = names.find(',', start);
        if (pos == std::string::npos) pos = names.size();
        const std::string item = names.substr(start, pos - start);
        if (!item.empty()) {
            ModelSpec spec;
            spec.kind = parse_model_kind(item);
            specs.push_back(spec);
        }
        start = pos + 1;
    }
    if (specs.empty()) throw ConfigError("--models produced an empty spec list");
    return specs;
}

void print_ranking(const std::vector<RankingEntry>& ranking) {
    std::printf("%-26s %s\n", "model", "cv rmse (N)");
    for (const auto& entry : ranking) {
        if (entry.ok)
            std::printf("%-26s %.4f\n", model_kind_name(entry.spec.kind).c_str(), entry.rmse);
        else
            std::printf("%-26s failed: %s\n", model_kind_name(entry.spec.kind).c_str(),
                        entry.error.c_str());
    }
}

void print_tolerance(const ToleranceReport& report) {
    std::printf("holdout tolerance report:\n");
    for (std::size_t i = 0; i < report.thresholds.size(); ++i)
        std::printf("  within +/-%.1f N: %.2f%%\n", report.thresholds[i],
                    report.pct_within[i]);
    std::printf("  mae  %.4f N (std %.4f)\n", report.mae, report.mae_std);
    std::printf("  rmse %.4f N\n", report.rmse);
}

int cmd_calibrate_train(const CommonOpts& opts, const std::string& dataset_path,
                        const std::string& models) {
    const WorkbenchConfig cfg = resolve_config(opts);
    const CalibrationDataset ds = read_dataset(dataset_path);
    const auto [train, test] = split_dataset(ds, 0.9, derive_seed(cfg.seed, kStreamSplit));
    const std::vector<ModelSpec> specs = specs_from_names(models);
    const auto [best, ranking] =
        select_model(train, specs, 10, derive_seed(cfg.seed, kStreamFolds));
    const RegressionModel model = train_model(train, best);
    const ToleranceReport report = tolerance_report(model, test);

    const fs::path dir = ensure_out_dir(opts);
    save_model(model, dir / "model.json");

    nlohmann::json ranking_json = nlohmann::json::array();
    for (const auto& entry : ranking)
        ranking_json.push_back({{"model", model_kind_name(entry.spec.kind)},
                                {"ok", entry.ok},
                                {"cv_rmse", entry.ok ? nlohmann::json(entry.rmse)
                                                     : nlohmann::json()},
                                {"error", entry.error}});
    nlohmann::json holdout = {{"thresholds_n", report.thresholds},
                              {"pct_within", report.pct_within},
                              {"mae_n", report.mae},
                              {"mae_std_n", report.mae_std},
                              {"rmse_n", report.rmse},
                              {"test_samples", test.size()}};
    nlohmann::json summary = {{"format_version", kFormatVersion},
                              {"selected_model", model_kind_name(best.kind)},
                              {"ranking", std::move(ranking_json)},
                              {"holdout", std::move(holdout)}};
    std::ofstream out(dir / "training_report.json", std::ios::binary);
    out << summary.dump(2) << '\n';
    if (!out) throw Error("failed writing training_report.json");

    std::printf("train/test split: %zu/%zu samples\n", train.size(), test.size());
    print_ranking(ranking);
    std::printf("selected: %s\n", model_kind_name(best.kind).c_str());
    print_tolerance(report);
    std::printf("wrote %s and training_report.json\n", (dir / "model.json").string().c_str());
    return 0;
}

void print_campaign(const CampaignReport& report) {
    std::printf("%-8s", "sample");
    for (int k = 0; k < report.trials_per_sample; ++k) std::printf("  trial%-2d", k + 1);
    std::printf("  avg mae\n");
    for (std::size_t si = 0; si < report.samples.size(); ++si) {
        std::printf("%-8d", report.samples[si].id);
        for (double v : report.mae[si]) {
            if (std::isnan(v))
                std::printf("  %-7s", "fail");
            else
                std::printf("  %-7.3f", v);
        }
        if (std::isnan(report.sample_avg_mae[si]))
            std::printf("  %s\n", "fail");
        else
            std::printf("  %.3f\n", report.sample_avg_mae[si]);
    }
    std::printf("max per-sample avg mae: %.3f N, max single-trial mae: %.3f N\n",
                report.max_avg_mae, report.max_trial_mae);
    std::printf("slip events: %zu, aborts: %zu\n", report.total_slip_events,
                report.abort_count);
    for (const std::string& f : report.failures) std::printf("failure: %s\n", f.c_str());
}

int cmd_trial_run(const CommonOpts& opts, const std::string& model_path,
                  const std::string& samples_path) {
    const WorkbenchConfig cfg = resolve_config(opts);
    const RegressionModel model = load_model(model_path);
    const std::vector<StrawberrySample> samples =
        samples_path.empty() ? strawberry_fixture() : read_samples_csv(samples_path);
    const SkinSimulator sim = cfg.make_simulator();
    const CampaignResult result =
        run_campaign(samples, cfg.trials_per_sample, model, cfg.trial, cfg.controller, sim,
                     derive_seed(cfg.seed, kStreamCampaign));

    const fs::path dir = ensure_out_dir(opts);
    write_campaign_report(result.report, dir / "campaign.json");
    for (const TrialLog& log : result.logs) {
        char name[64];
        std::snprintf(name, sizeof(name), "trial_s%d_seed%016" PRIx64 ".jsonl", log.sample_id,
                      log.seed);
        write_trial_log(log, dir / name);
    }
    print_campaign(result.report);
    std::printf("wrote campaign.json and %zu trial logs to %s\n", result.logs.size(),
                dir.string().c_str());
    return result.report.abort_count > 0 ? kExitAbort : 0;
}

int cmd_report(const CommonOpts& opts, const std::string& path) {
    const WorkbenchConfig cfg = resolve_config(opts);
    if (path.size() > 6 && path.substr(path.size() - 6) == ".jsonl") {
        const TrialLog log = read_trial_log(path);
        const PhaseBoundaries b = segment_phases(log);
        std::printf("ticks: %zu  S1=%zu S2=%zu S3=%zu\n", log.records.size(), b.s1, b.s2,
                    b.s3);
        std::printf("hold-window mae vs %.2f N: %.4f N\n", cfg.controller.target_force,
                    trial_mae(log, cfg.controller.target_force));
        return 0;
    }
    print_campaign(read_campaign_report(path));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic soft-tactile skin workbench: synthetic sensor, force "
                 "calibration, and grip-control trials"};
    app.fallthrough();

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "Workbench config file (key = value lines)");
    auto* seed_opt = app.add_option("--seed", opts.seed, "Master seed for every stage");
    app.add_option("--out", opts.out_dir, "Output directory")->capture_default_str();

    auto* calibrate = app.add_subcommand("calibrate", "Calibration pipeline");
    calibrate->fallthrough();
    calibrate->require_subcommand(1);

    int repeats_override = 0;
    auto* gen = calibrate->add_subcommand("generate", "Run the sweep protocol and write the "
                                                      "calibration dataset CSV");
    gen->fallthrough();
    gen->add_option("--repeats", repeats_override,
                    "Override presses per (subsection, depth) level");

    std::string dataset_path;
    std::string models;
    auto* train = calibrate->add_subcommand(
        "train", "Cross-validate the model zoo on a dataset CSV, fit the winner, and "
                 "write model.json plus a training report");
    train->fallthrough();
    train->add_option("dataset", dataset_path, "Calibration dataset CSV")->required();
    train->add_option("--models", models,
                      "Comma-separated model kinds to compare (default: all six)");

    auto* trial = app.add_subcommand("trial", "Pick-and-drop trials");
    trial->fallthrough();
    trial->require_subcommand(1);

    std::string model_path;
    std::string samples_path;
    auto* run = trial->add_subcommand("run", "Run the gripping campaign with a trained model");
    run->fallthrough();
    run->add_option("model", model_path, "Trained model JSON")->required();
    run->add_option("--samples", samples_path,
                    "Strawberry samples CSV (default: built-in five samples)");

    std::string report_path;
    auto* report = app.add_subcommand("report", "Pretty-print a campaign report or trial log");
    report->fallthrough();
    report->add_option("path", report_path, "campaign.json or a trial .jsonl log")->required();

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
        opts.seed_set = seed_opt->count() > 0;
        if (gen->parsed()) return cmd_calibrate_generate(opts, repeats_override);
        if (train->parsed()) return cmd_calibrate_train(opts, dataset_path, models);
        if (run->parsed()) return cmd_trial_run(opts, model_path, samples_path);
        if (report->parsed()) return cmd_report(opts, report_path);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const ProtocolError& e) {
        std::fprintf(stderr, "protocol error: %s\n", e.what());
        return kExitProtocol;
    } catch (const TrainingError& e) {
        std::fprintf(stderr, "training error: %s\n", e.what());
        return kExitTraining;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "training error: %s\n", e.what());
        return kExitTraining;
    } catch (const AbortError& e) {
        std::fprintf(stderr, "safety abort: %s\n", e.what());
        return kExitAbort;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
