#include "astbench/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "astbench/errors.hpp"
#include "astbench/rng.hpp"

namespace astbench {

namespace {

constexpr double kContactThreshold = 0.05; // N, S1 detection
constexpr double kGravity = 9.81;          // m/s^2

} // namespace

void StrawberrySample::validate() const {
    if (!(weight_n > 0.0)) throw ConfigError("strawberry weight must be positive");
    if (!(peduncle_diameter_mm > 0.0))
        throw ConfigError("peduncle diameter must be positive");
}

std::vector<StrawberrySample> strawberry_fixture() {
    return {
        {1, 0.084, 1.24}, {2, 0.111, 1.38}, {3, 0.155, 1.88},
        {4, 0.176, 1.90}, {5, 0.181, 2.29},
    };
}

void TrialConfig::validate() const {
    if (!(tick_s > 0.0)) throw ConfigError("tick must be positive");
    if (!(compliance > 0.0) || compliance > 0.5)
        throw ConfigError("compliance must be in (0, 0.5]");
    if (swing_amp_n < 0.0) throw ConfigError("swing amplitude must be non-negative");
    if (swing_freq_hz < 0.0) throw ConfigError("swing frequency must be non-negative");
    if (!(transport_duration_s > 0.0))
        throw ConfigError("transport duration must be positive");
    if (max_grip_ticks < 1) throw ConfigError("max_grip_ticks must be positive");
}

std::string to_string(TrialPhase phase) {
    switch (phase) {
        case TrialPhase::Approach: return "approach";
        case TrialPhase::Grip: return "grip";
        case TrialPhase::Transport: return "transport";
        case TrialPhase::Release: return "release";
    }
    return "?";
}

TrialPhase parse_trial_phase(const std::string& name) {
    if (name == "approach") return TrialPhase::Approach;
    if (name == "grip") return TrialPhase::Grip;
    if (name == "transport") return TrialPhase::Transport;
    if (name == "release") return TrialPhase::Release;
    throw ParseError("unknown trial phase '" + name + "'");
}

TrialLog run_trial(const StrawberrySample& sample, const RegressionModel& model,
                   const TrialConfig& cfg, const ControllerConfig& controller_cfg,
                   const SkinSimulator& sim) {
    sample.validate();
    cfg.validate();
    controller_cfg.validate();

    TrialLog log;
    log.sample_id = sample.id;
    log.seed = cfg.seed;
    log.subsection = static_cast<int>(
        derive_seed(cfg.seed, 0) % static_cast<std::uint64_t>(sim.geometry().n_subsections));

    ControllerState ctrl{cfg.initial_width_mm, GripDecision::Hold};
    TrialPhase phase = TrialPhase::Approach;
    double transport_start = 0.0;
    const double contact_width = sample.peduncle_diameter_mm;

    for (int i = 0;; ++i) {
        const double t = static_cast<double>(i) * cfg.tick_s;
        const std::uint64_t tick_seed = derive_seed(cfg.seed, 1 + static_cast<std::uint64_t>(i));

        if (phase == TrialPhase::Transport && t - transport_start >= cfg.transport_duration_s)
            phase = TrialPhase::Release; // the strawberry drops as the fingers open

        double true_force = 0.0;
        if (phase != TrialPhase::Release) {
            const double depth_cmd =
                cfg.compliance * std::max(0.0, contact_width - ctrl.width_mm);
            double f = contact_force(depth_cmd, sim.contact());
            if (phase == TrialPhase::Transport)
                f += cfg.swing_amp_n *
                     std::sin(2.0 * std::numbers::pi * cfg.swing_freq_hz * t);
            true_force = std::max(0.0, f);
        }
        // The skin reads whatever force actually presses on it, so sense
        // at the depth that produces the current true force.
        const double effective_depth = contact_depth_for_force(true_force, sim.contact());
        const auto [features, ignored] = sim.sense(log.subsection, effective_depth, tick_seed);
        const double measured = model.predict(features);

        if (phase == TrialPhase::Approach && true_force > 0.0) phase = TrialPhase::Grip;
        if (phase == TrialPhase::Grip &&
            deadband_status(measured, controller_cfg) == DeadbandStatus::Within) {
            phase = TrialPhase::Transport;
            transport_start = t;
        }

        log.records.push_back({t, phase, measured, true_force, ctrl.width_mm});

        if (phase == TrialPhase::Release) {
            if (ctrl.width_mm >= controller_cfg.width_max) break;
            ctrl.width_mm =
                std::min(ctrl.width_mm + controller_cfg.step_mm, controller_cfg.width_max);
        } else {
            try {
                ctrl = controller_step(ctrl, measured, controller_cfg);
            } catch (const AbortError& e) {
                throw AbortError("trial sample " + std::to_string(sample.id) + ": " + e.what());
            }
            if (phase != TrialPhase::Transport && i >= cfg.max_grip_ticks)
                throw TimeoutError("grip did not settle within " +
                                   std::to_string(cfg.max_grip_ticks) + " ticks (sample " +
                                   std::to_string(sample.id) + ")");
        }
    }
    return log;
}

PhaseBoundaries segment_phases(const TrialLog& log) {
    PhaseBoundaries b;
    bool s1_found = false, s2_found = false, s3_found = false;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& r = log.records[i];
        if (!s1_found && r.true_force > kContactThreshold) {
            b.s1 = i;
            s1_found = true;
        }
        if (!s2_found && r.phase == TrialPhase::Transport) {
            b.s2 = i;
            s2_found = true;
        }
        if (!s3_found && r.phase == TrialPhase::Release) {
            b.s3 = i;
            s3_found = true;
        }
    }
    if (!s1_found) throw SegmentationError("no contact found in trial log");
    if (!s2_found) throw SegmentationError("no transport phase in trial log");
    if (!s3_found) throw SegmentationError("no release phase in trial log");
    return b;
}

double trial_mae(const TrialLog& log, double target_force) {
    const PhaseBoundaries b = segment_phases(log);
    if (b.s2 >= b.s3) throw EvaluationError("empty hold window");
    double acc = 0.0;
    for (std::size_t i = b.s2; i < b.s3; ++i)
        acc += std::abs(log.records[i].measured_force - target_force);
    return acc / static_cast<double>(b.s3 - b.s2);
}

std::vector<std::size_t> slip_check(const TrialLog& log, const StrawberrySample& sample,
                                    double mu, double safety_factor, double a_max) {
    const PhaseBoundaries b = segment_phases(log);
    GripSizing sizing;
    sizing.mass_kg = sample.weight_n / kGravity;
    sizing.gravity = kGravity;
    sizing.accel = a_max;
    sizing.mu = mu;
    sizing.safety_factor = safety_factor;
    const double required_total = required_grip_force(sizing);
    std::vector<std::size_t> events;
    for (std::size_t i = b.s2; i < b.s3; ++i)
        if (2.0 * log.records[i].measured_force < required_total) events.push_back(i);
    return events;
}

CampaignResult run_campaign(const std::vector<StrawberrySample>& samples,
                            int trials_per_sample, const RegressionModel& model,
                            const TrialConfig& cfg, const ControllerConfig& controller_cfg,
                            const SkinSimulator& sim, std::uint64_t seed) {
    if (samples.empty()) throw ConfigError("campaign needs at least one sample");
    if (trials_per_sample < 1) throw ConfigError("trials_per_sample must be positive");

    CampaignResult result;
    CampaignReport& report = result.report;
    report.samples = samples;
    report.trials_per_sample = trials_per_sample;
    report.seed = seed;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.max_trial_mae = 0.0;

    for (std::size_t si = 0; si < samples.size(); ++si) {
        report.mae.emplace_back(static_cast<std::size_t>(trials_per_sample), nan);
        report.slips.emplace_back(static_cast<std::size_t>(trials_per_sample), 0);
        double mae_sum = 0.0;
        int ok_count = 0;
        for (int k = 0; k < trials_per_sample; ++k) {
            TrialConfig trial_cfg = cfg;
            trial_cfg.seed = derive_seed(seed, (static_cast<std::uint64_t>(si) << 16) |
                                                   static_cast<std::uint64_t>(k));
            try {
                TrialLog log = run_trial(samples[si], model, trial_cfg, controller_cfg, sim);
                const double mae = trial_mae(log, controller_cfg.target_force);
                const auto events = slip_check(log, samples[si]);
                report.mae[si][static_cast<std::size_t>(k)] = mae;
                report.slips[si][static_cast<std::size_t>(k)] = events.size();
                report.total_slip_events += events.size();
                report.max_trial_mae = std::max(report.max_trial_mae, mae);
                mae_sum += mae;
                ++ok_count;
                result.logs.push_back(std::move(log));
            } catch (const AbortError& e) {
                ++report.abort_count;
                report.failures.push_back("sample " + std::to_string(samples[si].id) +
                                          " trial " + std::to_string(k + 1) + ": " + e.what());
            } catch (const Error& e) {
                report.failures.push_back("sample " + std::to_string(samples[si].id) +
                                          " trial " + std::to_string(k + 1) + ": " + e.what());
            }
        }
        report.sample_avg_mae.push_back(ok_count > 0 ? mae_sum / ok_count : nan);
    }
    report.max_avg_mae = 0.0;
    for (double avg : report.sample_avg_mae)
        if (!std::isnan(avg)) report.max_avg_mae = std::max(report.max_avg_mae, avg);
    return result;
}

} // namespace astbench
