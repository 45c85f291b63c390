// Acceptance suite: runs every workbench gate end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "astbench/calib.hpp"
#include "astbench/errors.hpp"
#include "astbench/gp.hpp"
#include "astbench/grip.hpp"
#include "astbench/io.hpp"
#include "astbench/model.hpp"
#include "astbench/rng.hpp"
#include "astbench/signal.hpp"
#include "astbench/skin.hpp"
#include "astbench/trial.hpp"

using namespace astbench;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::string name;
    double budget_s = 0.0;
    std::function<bool(std::string&)> body;
};

// Mirrors the CLI's per-stage seed streams.
constexpr std::uint64_t kSeed = 42;
constexpr std::uint64_t kStreamDataset = 1;
constexpr std::uint64_t kStreamSplit = 2;
constexpr std::uint64_t kStreamFolds = 3;
constexpr std::uint64_t kStreamCampaign = 4;

struct PipelineArtifacts {
    CalibrationDataset train;
    CalibrationDataset test;
    std::vector<RankingEntry> ranking;
    ModelSpec best;
    RegressionModel model;
    ToleranceReport holdout;
    bool ready = false;
};

PipelineArtifacts g_pipeline;

SkinSimulator default_sim() {
    return {SkinGeometry{}, ContactModel{}, AttenuationModel{}, SignalConfig{}};
}

void run_default_pipeline() {
    const SkinSimulator sim = default_sim();
    const CalibrationDataset ds =
        generate_dataset(SweepProtocol{}, sim, derive_seed(kSeed, kStreamDataset));
    auto [train, test] = split_dataset(ds, 0.9, derive_seed(kSeed, kStreamSplit));
    auto [best, ranking] =
        select_model(train, default_model_specs(), 10, derive_seed(kSeed, kStreamFolds));
    g_pipeline.model = train_model(train, best);
    g_pipeline.holdout = tolerance_report(g_pipeline.model, test);
    g_pipeline.train = std::move(train);
    g_pipeline.test = std::move(test);
    g_pipeline.best = best;
    g_pipeline.ranking = std::move(ranking);
    g_pipeline.ready = true;
}

double ranking_rmse(ModelKind kind) {
    for (const auto& entry : g_pipeline.ranking)
        if (entry.spec.kind == kind && entry.ok) return entry.rmse;
    return std::nan("");
}

// --- criterion bodies -------------------------------------------------

bool check_grip_sizing(std::string& detail) {
    GripSizing sizing;
    sizing.mass_kg = 0.091;
    sizing.gravity = 9.81;
    sizing.accel = 1.0;
    sizing.mu = 0.5;
    sizing.safety_factor = 2.0;
    const double f = required_grip_force(sizing);
    const double expected = 0.091 * (9.81 + 1.0) * 2.0 / 0.5;
    std::ostringstream out;
    out << "F_g = " << f << " N";
    detail = out.str();
    return std::abs(f - expected) <= 1e-9 && std::abs(f - 3.93484) <= 1e-9 &&
           std::round(f * 1000.0) / 1000.0 == 3.935;
}

bool check_controller_branches(std::string& detail) {
    const ControllerConfig cfg;
    ControllerState s{30.0, GripDecision::Hold};
    s = controller_step(s, 1.5, cfg);
    bool ok = s.width_mm == 29.0 && s.last_decision == GripDecision::Close;
    s = controller_step(s, 2.05, cfg);
    ok = ok && s.width_mm == 29.0 && s.last_decision == GripDecision::Hold;
    s = controller_step(s, 2.5, cfg);
    ok = ok && s.width_mm == 30.0 && s.last_decision == GripDecision::Open;

    Rng rng(2024);
    int branch_counts[3] = {0, 0, 0};
    for (int rep = 0; rep < 10000 && ok; ++rep) {
        const double f = 10.0 * rng.uniform();
        const bool below = f < cfg.target_force - cfg.epsilon;
        const bool above = f > cfg.target_force + cfg.epsilon;
        const DeadbandStatus status = deadband_status(f, cfg);
        const int fired = (status == DeadbandStatus::Below) + (status == DeadbandStatus::Within) +
                          (status == DeadbandStatus::Above);
        ok = fired == 1 && (below == (status == DeadbandStatus::Below)) &&
             (above == (status == DeadbandStatus::Above));
        ++branch_counts[static_cast<int>(status)];
        const ControllerState next = controller_step({15.0, GripDecision::Hold}, f, cfg);
        const double delta = std::abs(next.width_mm - 15.0);
        ok = ok && (delta == 0.0 || delta == 1.0);
    }
    detail = "10000 random readings partitioned " + std::to_string(branch_counts[0]) + "/" +
             std::to_string(branch_counts[1]) + "/" + std::to_string(branch_counts[2]);
    return ok;
}

bool check_calibration_pipeline(std::string& detail) {
    run_default_pipeline();
    const ToleranceReport& r = g_pipeline.holdout;
    std::ostringstream out;
    out << "winner " << model_kind_name(g_pipeline.best.kind) << "; within 0.5/1.0/2.0 N: "
        << r.pct_within[0] << "/" << r.pct_within[1] << "/" << r.pct_within[3]
        << " %; mae " << r.mae << " N";
    detail = out.str();
    return g_pipeline.best.kind == ModelKind::GpExponential && r.pct_within[0] >= 85.0 &&
           r.pct_within[1] >= 98.0 && r.pct_within[3] == 100.0 && r.mae <= 0.25;
}

bool check_model_ranking(std::string& detail) {
    if (!g_pipeline.ready) return false;
    const double gp = ranking_rmse(ModelKind::GpExponential);
    const double linear = ranking_rmse(ModelKind::LinearLeastSquares);
    std::ostringstream out;
    out << "cv rmse gp-exponential " << gp << " vs linear " << linear;
    detail = out.str();
    return std::isfinite(gp) && std::isfinite(linear) && gp < linear;
}

bool check_campaign(std::string& detail) {
    if (!g_pipeline.ready) return false;
    const SkinSimulator sim = default_sim();
    const CampaignResult result =
        run_campaign(strawberry_fixture(), 5, g_pipeline.model, TrialConfig{},
                     ControllerConfig{}, sim, derive_seed(kSeed, kStreamCampaign));
    const CampaignReport& rep = result.report;
    std::ostringstream out;
    out << "max avg mae " << rep.max_avg_mae << " N, max trial mae " << rep.max_trial_mae
        << " N, slips " << rep.total_slip_events << ", aborts " << rep.abort_count;
    detail = out.str();
    return rep.failures.empty() && rep.abort_count == 0 && rep.total_slip_events == 0 &&
           rep.max_trial_mae <= 0.7 && rep.max_avg_mae <= 0.31 && result.logs.size() == 25;
}

// Dense-solve oracle, independent of the Cholesky path.
double oracle_mean(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                   const std::vector<double>& q, ModelKind kind, const GpParams& p) {
    const std::size_t n = x.size();
    auto dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) acc += (a[c] - b[c]) * (a[c] - b[c]);
        return std::sqrt(acc);
    };
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    std::vector<double> rhs = y;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            k[i][j] = gp_kernel_value(kind, dist(x[i], x[j]), p) + (i == j ? p.sigma_n2 : 0.0);
    for (std::size_t col = 0; col < n; ++col) { // Gauss-Jordan, partial pivot
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(k[r][col]) > std::abs(k[pivot][col])) pivot = r;
        std::swap(k[col], k[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = k[r][col] / k[col][col];
            for (std::size_t c = col; c < n; ++c) k[r][c] -= factor * k[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        mean += rhs[i] / k[i][i] * gp_kernel_value(kind, dist(x[i], q), p);
    return mean;
}

bool check_gp_oracle(std::string& detail) {
    Rng rng(8675309);
    double worst = 0.0;
    for (ModelKind kind : {ModelKind::GpExponential, ModelKind::GpSquaredExponential,
                           ModelKind::GpMatern52, ModelKind::GpRationalQuadratic}) {
        for (int rep = 0; rep < 50; ++rep) {
            const std::size_t n = 1 + rng.below(5);
            const std::size_t dim = 1 + rng.below(3);
            std::vector<std::vector<double>> x(n, std::vector<double>(dim));
            std::vector<double> y(n);
            Matrix inputs(n, dim);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t c = 0; c < dim; ++c) {
                    x[i][c] = 4.0 * rng.uniform() - 2.0;
                    inputs(i, c) = x[i][c];
                }
                y[i] = 6.0 * rng.uniform() - 3.0;
            }
            GpParams p{0.5 + 2.0 * rng.uniform(), 0.3 + 2.0 * rng.uniform(),
                       0.01 + 0.2 * rng.uniform(), 1.0};
            GpRegressor gp;
            gp.fit(inputs, y, kind, p);
            std::vector<double> q(dim);
            for (double& c : q) c = 4.0 * rng.uniform() - 2.0;
            const double expected = oracle_mean(x, y, q, kind, p);
            const double got = gp.predict_mean(q);
            worst = std::max(worst,
                             std::abs(got - expected) / std::max(1.0, std::abs(expected)));
        }
    }

    // two-point closed form at x = 0.5
    Matrix two(2, 1);
    two(1, 0) = 1.0;
    GpRegressor gp;
    gp.fit(two, {0.0, 1.0}, ModelKind::GpExponential, GpParams{1.0, 1.0, 0.0, 1.0});
    const std::vector<double> q = {0.5};
    const double closed_form = std::exp(-0.5) / (1.0 + std::exp(-1.0));
    const double two_point = gp.predict_mean(q);

    std::ostringstream out;
    out << "worst oracle mismatch " << worst << ", two-point mean " << two_point;
    detail = out.str();
    return worst <= 1e-9 && std::abs(two_point - closed_form) <= 1e-9 &&
           std::abs(two_point - 0.4434) <= 2e-4;
}

bool check_signal_invariants(std::string& detail) {
    // Parseval on a random frame
    Rng rng(42);
    TimeSignal frame;
    frame.samples.resize(4096);
    for (double& s : frame.samples) s = 2.0 * rng.uniform() - 1.0;
    double time_energy = 0.0;
    for (double s : frame.samples) time_energy += s * s;
    const std::vector<double> mag = fft_magnitude(frame);
    double spec_energy = mag.front() * mag.front() + mag.back() * mag.back();
    for (std::size_t k = 1; k + 1 < mag.size(); ++k) spec_energy += 2.0 * mag[k] * mag[k];
    spec_energy /= 4096.0;
    const double parseval_err = std::abs(time_energy - spec_energy) / time_energy;
    bool ok = parseval_err <= 1e-9;

    // every reference tone lands on its own bin
    const SignalConfig cfg;
    const std::vector<double> spectrum = fft_magnitude(synth_reference(cfg));
    const SpectrumFeatures bands = band_features(spectrum, cfg);
    for (std::size_t i = 0; i < bands.size() && ok; ++i)
        ok = bands[i] > 0.45 * 4096.0 / 2.0; // near the full half-frame magnitude
    double off_tone_peak = 0.0;
    std::vector<std::size_t> tone_bins;
    for (double f : cfg.tone_freqs)
        tone_bins.push_back(static_cast<std::size_t>(std::llround(f / cfg.bin_width())));
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        bool is_tone = false;
        for (std::size_t b : tone_bins) is_tone = is_tone || k == b;
        if (!is_tone) off_tone_peak = std::max(off_tone_peak, spectrum[k]);
    }
    ok = ok && off_tone_peak < 1e-6 * (4096.0 / 2.0);

    // exp(-1) attenuation closed form
    AttenuationModel am;
    am.alpha0 = 2.0;
    am.alpha1 = 0.0;
    am.noise_sigma = 0.0;
    const SpectrumFeatures ref = reference_features(cfg);
    const SpectrumFeatures out_features = transmit(ref, 0.5, am, 7);
    double atten_err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        atten_err = std::max(atten_err,
                             std::abs(out_features[i] - ref[i] * std::exp(-1.0)) / ref[i]);
    ok = ok && atten_err <= 1e-12;

    std::ostringstream o;
    o << "parseval rel err " << parseval_err << ", leakage/attenuation max err " << atten_err;
    detail = o.str();
    return ok;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args, const fs::path& capture) {
    const std::string cmd =
        std::string(ASTBENCH_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool check_determinism_roundtrips(std::string& detail) {
    const fs::path root = fs::temp_directory_path() / "astbench_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path out = root / "out";

    auto snapshot = [&]() {
        std::vector<std::pair<std::string, std::string>> files;
        if (fs::exists(out))
            for (const auto& entry : fs::directory_iterator(out))
                if (entry.is_regular_file())
                    files.emplace_back(entry.path().filename().string(), slurp(entry.path()));
        std::sort(files.begin(), files.end());
        return files;
    };

    // Re-running the identical command must reproduce every output file
    // and the printed report byte for byte.
    int commands_checked = 0;
    auto same_twice = [&](const std::string& args) {
        if (run_cli(args, root / "cap1.txt") != 0) return false;
        const auto files_first = snapshot();
        const std::string stdout_first = slurp(root / "cap1.txt");
        if (run_cli(args, root / "cap2.txt") != 0) return false;
        ++commands_checked;
        return snapshot() == files_first && slurp(root / "cap2.txt") == stdout_first;
    };

    bool ok = same_twice("calibrate generate --repeats 3 --seed 42 --out " + out.string());
    ok = ok && same_twice("calibrate train " + (out / "dataset.csv").string() +
                          " --models linear-least-squares,gp-exponential --seed 42 --out " +
                          out.string());
    ok = ok && same_twice("trial run " + (out / "model.json").string() + " --seed 42 --out " +
                          out.string());
    ok = ok && same_twice("report " + (out / "campaign.json").string());
    if (!ok) {
        detail = "a command failed or produced differing bytes (after " +
                 std::to_string(commands_checked) + " verified)";
        return false;
    }

    // round-trips are lossless at the stated precisions
    const CalibrationDataset ds = read_dataset(out / "dataset.csv");
    const fs::path rewritten = root / "rewritten.csv";
    write_dataset(ds, rewritten);
    ok = slurp(out / "dataset.csv") == slurp(rewritten);

    const RegressionModel m = load_model(out / "model.json");
    const fs::path remodel = root / "remodel.json";
    save_model(m, remodel);
    ok = ok && slurp(out / "model.json") == slurp(remodel);
    Rng rng(3);
    double worst = 0.0;
    const RegressionModel m2 = load_model(remodel);
    for (int rep = 0; rep < 100; ++rep) {
        SpectrumFeatures probe = ds.samples[rng.below(ds.size())].features;
        for (double& v : probe.bands) v *= 0.9 + 0.2 * rng.uniform();
        const double pa = m.predict(probe);
        const double pb = m2.predict(probe);
        worst = std::max(worst, std::abs(pa - pb) / std::max(1.0, std::abs(pa)));
    }
    ok = ok && worst <= 1e-12;

    fs::path one_log;
    for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().extension() == ".jsonl") one_log = entry.path();
    ok = ok && !one_log.empty();
    if (ok) {
        const TrialLog log = read_trial_log(one_log);
        const fs::path relog = root / "relog.jsonl";
        write_trial_log(log, relog);
        ok = slurp(one_log) == slurp(relog);
    }

    detail = std::to_string(commands_checked) +
             " commands x 2 runs byte-compared; model re-predict worst rel diff " +
             std::to_string(worst);
    return ok;
}

} // namespace

int main() {
    { // pay one-time stream/locale setup before anything is timed
        std::ostringstream warmup;
        warmup << 3.935;
    }
    std::vector<Check> checks = {
        {"grip-force sizing closed form", 0.001, check_grip_sizing},
        {"controller branch table and partition", 1.0, check_controller_branches},
        {"calibration pipeline selection and holdout", 60.0, check_calibration_pipeline},
        {"gp-exponential beats linear in cv", 60.0, check_model_ranking},
        {"pick-and-drop campaign", 30.0, check_campaign},
        {"gp mean matches dense-solve oracle", 5.0, check_gp_oracle},
        {"signal chain invariants", 5.0, check_signal_invariants},
        {"cli determinism and round-trips", 60.0, check_determinism_roundtrips},
    };

    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = checks[i].body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed <= checks[i].budget_s;
        // criterion 4 shares criterion 3's pipeline run; its own time is ~0
        if (!in_budget) pass = false;
        std::printf("[%zu/8] %-45s %s (%.2f s%s)  %s\n", i + 1, checks[i].name.c_str(),
                    pass ? "PASS" : "FAIL", elapsed,
                    in_budget ? "" : " OVER BUDGET", detail.c_str());
        std::fflush(stdout);
        failures += !pass;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", checks.size() - failures,
                checks.size());
    return failures;
}
