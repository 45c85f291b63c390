#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "astbench/signal.hpp"
#include "astbench/skin.hpp"

namespace astbench {

/// One (spectrum, force) record from the sweep protocol.
struct CalibrationSample {
    int subsection = 0;
    double depth_mm = 0.0;
    double force_n = 0.0;
    SpectrumFeatures features;
};

/// Parameters the sweep was generated with; carried for reproducibility.
struct SweepProvenance {
    double depth_step = 0.0;
    double force_stop = 0.0;
    int repeats = 0;
    std::uint64_t seed = 0;
};

struct CalibrationDataset {
    std::vector<CalibrationSample> samples;
    SweepProvenance provenance;

    std::size_t size() const { return samples.size(); }
    std::size_t feature_dim() const;

    /// Throws DatasetError when empty or feature lengths disagree.
    void validate() const;
};

/// Press-depth sweep: equal depth increments until the contact force
/// reaches the stop threshold, repeated with fresh noise seeds.
struct SweepProtocol {
    double depth_step = 0.5; // mm
    double force_stop = 10.0; // N
    int repeats = 20;

    void validate() const;
};

/// Runs the sweep on every subsection. Each (subsection, depth) pair is
/// sensed `repeats` times with seeds derived from `seed`; the recorded
/// force label is the exact ground-truth contact force.
CalibrationDataset generate_dataset(const SweepProtocol& protocol, const SkinSimulator& sim,
                                    std::uint64_t seed);

/// The depth levels one sweep visits, including the first level at or
/// above force_stop.
std::vector<double> sweep_depth_levels(const SweepProtocol& protocol, const ContactModel& cm);

/// Seeded shuffle split into train / test; |train| = round(fraction · N).
std::pair<CalibrationDataset, CalibrationDataset> split_dataset(const CalibrationDataset& ds,
                                                                double train_fraction = 0.9,
                                                                std::uint64_t seed = 0);

} // namespace astbench
