#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "astbench/calib.hpp"
#include "astbench/grip.hpp"
#include "astbench/signal.hpp"
#include "astbench/skin.hpp"
#include "astbench/trial.hpp"

namespace astbench {

/// Every tunable of the workbench in one place; defaults match the
/// per-module defaults. Loaded from a flat `key = value` file with `#`
/// comments; unknown keys are configuration errors.
struct WorkbenchConfig {
    SignalConfig signal;
    SkinGeometry geometry;
    ContactModel contact;
    AttenuationModel attenuation;
    SweepProtocol protocol;
    ControllerConfig controller;
    TrialConfig trial;
    int trials_per_sample = 5;
    std::uint64_t seed = 42;

    void validate() const;
    SkinSimulator make_simulator() const;
};

/// Applies one key/value pair; throws ConfigError naming unknown keys or
/// unparseable values.
void apply_config_entry(WorkbenchConfig& cfg, const std::string& key,
                        const std::string& value);

WorkbenchConfig load_workbench_config(const std::filesystem::path& path);

} // namespace astbench
