#include "astbench/grip.hpp"

#include <algorithm>
#include <string>

#include "astbench/errors.hpp"

namespace astbench {

void GripSizing::validate() const {
    if (mass_kg < 0.0) throw DomainError("mass must be non-negative");
    if (!(mu > 0.0)) throw DomainError("friction coefficient must be positive");
    if (safety_factor < 1.0) throw DomainError("safety factor must be at least 1");
    if (!(gravity + accel > 0.0)) throw DomainError("g + a must be positive");
}

double required_grip_force(const GripSizing& sizing) {
    sizing.validate();
    return sizing.mass_kg * (sizing.gravity + sizing.accel) * sizing.safety_factor / sizing.mu;
}

std::string to_string(DeadbandStatus s) {
    switch (s) {
        case DeadbandStatus::Below: return "below";
        case DeadbandStatus::Within: return "within";
        case DeadbandStatus::Above: return "above";
    }
    return "?";
}

std::string to_string(GripDecision d) {
    switch (d) {
        case GripDecision::Close: return "close";
        case GripDecision::Hold: return "hold";
        case GripDecision::Open: return "open";
    }
    return "?";
}

void ControllerConfig::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(step_mm > 0.0)) throw ConfigError("sigma_h must be positive");
    if (!(width_min < width_max)) throw ConfigError("width_min must be below width_max");
    if (!(abort_force > target_force + epsilon))
        throw ConfigError("abort force must exceed the top of the deadband");
    if (target_force < 0.0) throw ConfigError("target force must be non-negative");
}

DeadbandStatus deadband_status(double measured_force, const ControllerConfig& cfg) {
    if (measured_force < cfg.target_force - cfg.epsilon) return DeadbandStatus::Below;
    if (measured_force > cfg.target_force + cfg.epsilon) return DeadbandStatus::Above;
    return DeadbandStatus::Within;
}

ControllerState controller_step(const ControllerState& state, double measured_force,
                                const ControllerConfig& cfg) {
    cfg.validate();
    if (measured_force < 0.0)
        throw DomainError("measured force must be non-negative, got " +
                          std::to_string(measured_force));
    if (measured_force > cfg.abort_force)
        throw AbortError("measured force " + std::to_string(measured_force) +
                         " N exceeds the " + std::to_string(cfg.abort_force) +
                         " N safety limit");

    ControllerState next = state;
    switch (deadband_status(measured_force, cfg)) {
        case DeadbandStatus::Below:
            next.width_mm = state.width_mm - cfg.step_mm;
            next.last_decision = GripDecision::Close;
            break;
        case DeadbandStatus::Within:
            next.last_decision = GripDecision::Hold;
            break;
        case DeadbandStatus::Above:
            next.width_mm = state.width_mm + cfg.step_mm;
            next.last_decision = GripDecision::Open;
            break;
    }
    next.width_mm = std::clamp(next.width_mm, cfg.width_min, cfg.width_max);
    return next;
}

} // namespace astbench
