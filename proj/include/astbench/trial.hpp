#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "astbench/grip.hpp"
#include "astbench/model.hpp"
#include "astbench/skin.hpp"

namespace astbench {

/// One strawberry: weight force and peduncle diameter.
struct StrawberrySample {
    int id = 0;
    double weight_n = 0.0;
    double peduncle_diameter_mm = 0.0;

    void validate() const;
};

/// The five built-in samples used by the gripping trials.
std::vector<StrawberrySample> strawberry_fixture();

/// Pick-and-drop loop parameters. Compliance converts commanded width
/// below the contact width into skin indentation; the swing term models
/// the strawberry swaying while the arm carries it.
struct TrialConfig {
    double tick_s = 0.02;
    double initial_width_mm = 20.0;
    double compliance = 0.125; // mm of indentation per mm of width change
    double transport_duration_s = 4.0;
    double swing_amp_n = 0.15;
    double swing_freq_hz = 1.5;
    std::uint64_t seed = 42;
    int max_grip_ticks = 500;

    void validate() const;
};

enum class TrialPhase { Approach, Grip, Transport, Release };

std::string to_string(TrialPhase phase);
TrialPhase parse_trial_phase(const std::string& name);

struct TrialRecord {
    double t = 0.0;           // s
    TrialPhase phase = TrialPhase::Approach;
    double measured_force = 0.0; // f_m, from the calibration model
    double true_force = 0.0;     // ground truth
    double grip_width = 0.0;     // mm
};

struct TrialLog {
    std::vector<TrialRecord> records;
    int sample_id = 0;
    std::uint64_t seed = 0;
    int subsection = 0;
};

/// Runs one trial: close until the measured force settles inside the
/// deadband, carry for the transport duration under the swing
/// disturbance, then open and drop. Throws AbortError when the safety
/// guard fires and TimeoutError when the grip never settles.
TrialLog run_trial(const StrawberrySample& sample, const RegressionModel& model,
                   const TrialConfig& cfg, const ControllerConfig& controller_cfg,
                   const SkinSimulator& sim);

/// Tick indices of the three profile landmarks: first contact, start of
/// transport, start of release.
struct PhaseBoundaries {
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    std::size_t s3 = 0;
};

PhaseBoundaries segment_phases(const TrialLog& log);

/// Mean absolute deviation of the measured force from the target over the
/// hold window [S2, S3).
double trial_mae(const TrialLog& log, double target_force);

/// Hold-window ticks where the total grip force is too small to carry the
/// sample: 2 f_m < m (g + a_max) S / mu with m = weight / g.
std::vector<std::size_t> slip_check(const TrialLog& log, const StrawberrySample& sample,
                                    double mu = 0.5, double safety_factor = 2.0,
                                    double a_max = 1.0);

struct CampaignReport {
    std::vector<StrawberrySample> samples;
    std::vector<std::vector<double>> mae;          // [sample][trial], NaN on failure
    std::vector<std::vector<std::size_t>> slips;   // [sample][trial]
    std::vector<std::string> failures;             // "sample/trial: reason"
    std::vector<double> sample_avg_mae;            // NaN when no trial succeeded
    double max_avg_mae = 0.0;
    double max_trial_mae = 0.0;
    std::size_t total_slip_events = 0;
    std::size_t abort_count = 0;
    int trials_per_sample = 0;
    std::uint64_t seed = 0;
};

struct CampaignResult {
    CampaignReport report;
    std::vector<TrialLog> logs; // successful trials, campaign order
};

/// Repeats the trial per sample with derived seeds; individual failures
/// are recorded and the campaign proceeds.
CampaignResult run_campaign(const std::vector<StrawberrySample>& samples,
                            int trials_per_sample, const RegressionModel& model,
                            const TrialConfig& cfg, const ControllerConfig& controller_cfg,
                            const SkinSimulator& sim, std::uint64_t seed);

} // namespace astbench
