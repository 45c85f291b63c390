#pragma once

#include <string>

namespace astbench {

/// Inputs to the static grip-force sizing rule F = m·(g + a)·S / mu.
struct GripSizing {
    double mass_kg = 0.0;
    double gravity = 9.81;    // m/s^2
    double accel = 0.0;       // m/s^2, worst-case manipulator acceleration
    double mu = 0.5;          // finger-surface friction coefficient
    double safety_factor = 2.0;

    void validate() const;
};

/// Net gripping force needed to hold the mass without slip.
double required_grip_force(const GripSizing& sizing);

enum class DeadbandStatus { Below, Within, Above };
enum class GripDecision { Close, Hold, Open };

std::string to_string(DeadbandStatus s);
std::string to_string(GripDecision d);

/// Reactive width controller: step closed below the deadband, hold inside
/// it, step open above it. Boundary readings f_d ± epsilon count as
/// within (the outer branches use strict inequalities).
struct ControllerConfig {
    double target_force = 2.0; // N, f_d
    double epsilon = 0.1;      // N, deadband half-width
    double step_mm = 1.0;      // sigma_h
    double width_min = -20.0;  // mm; soft fingers allow command overtravel
    double width_max = 30.0;   // mm
    double abort_force = 10.0; // N, safety ceiling

    void validate() const;
};

struct ControllerState {
    double width_mm = 0.0;
    GripDecision last_decision = GripDecision::Hold;
};

DeadbandStatus deadband_status(double measured_force, const ControllerConfig& cfg);

/// One control tick. Throws AbortError when the measured force exceeds
/// the abort ceiling and DomainError on negative readings. The returned
/// width is clamped to [width_min, width_max].
ControllerState controller_step(const ControllerState& state, double measured_force,
                                const ControllerConfig& cfg);

} // namespace astbench
