#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "astbench/errors.hpp"
#include "astbench/grip.hpp"
#include "astbench/rng.hpp"

using namespace astbench;

TEST_CASE("grip force sizing matches the worked example") {
    GripSizing s;
    s.mass_kg = 0.091;
    s.gravity = 9.81;
    s.accel = 1.0;
    s.mu = 0.5;
    s.safety_factor = 2.0;
    const double f = required_grip_force(s);
    CHECK(std::abs(f - 3.93484) <= 1e-9);
    CHECK(std::round(f * 1000.0) / 1000.0 == 3.935);
    CHECK(std::round(f) == 4.0); // the assumed 4 N total grip
}

TEST_CASE("grip force sizing edge cases") {
    GripSizing s;
    s.mass_kg = 0.0;
    CHECK(required_grip_force(s) == 0.0);

    s.mass_kg = 0.102;
    s.accel = 0.0;
    s.mu = 1.0;
    s.safety_factor = 1.0;
    CHECK(std::abs(required_grip_force(s) - 1.00062) <= 1e-9);

    s.mu = 0.0;
    CHECK_THROWS_AS(required_grip_force(s), DomainError);
    s.mu = -0.5;
    CHECK_THROWS_AS(required_grip_force(s), DomainError);
}

TEST_CASE("deadband branches including exact boundaries") {
    const ControllerConfig cfg;
    CHECK(deadband_status(1.5, cfg) == DeadbandStatus::Below);
    CHECK(deadband_status(1.9, cfg) == DeadbandStatus::Within);  // boundary is inside
    CHECK(deadband_status(2.0, cfg) == DeadbandStatus::Within);
    CHECK(deadband_status(2.1, cfg) == DeadbandStatus::Within);  // boundary is inside
    CHECK(deadband_status(2.25, cfg) == DeadbandStatus::Above);
    CHECK(deadband_status(0.0, cfg) == DeadbandStatus::Below);
}

TEST_CASE("controller steps match the three branch examples") {
    const ControllerConfig cfg;
    ControllerState state{30.0, GripDecision::Hold};

    state = controller_step(state, 1.5, cfg);
    CHECK(state.width_mm == 29.0);
    CHECK(state.last_decision == GripDecision::Close);

    state = controller_step(state, 2.05, cfg);
    CHECK(state.width_mm == 29.0);
    CHECK(state.last_decision == GripDecision::Hold);

    state = controller_step(state, 2.5, cfg);
    CHECK(state.width_mm == 30.0);
    CHECK(state.last_decision == GripDecision::Open);
}

TEST_CASE("width commands clamp to the configured travel") {
    ControllerConfig cfg;
    cfg.width_min = 0.0;
    cfg.width_max = 5.0;
    ControllerState at_min{0.0, GripDecision::Hold};
    CHECK(controller_step(at_min, 0.5, cfg).width_mm == 0.0);
    ControllerState at_max{5.0, GripDecision::Hold};
    CHECK(controller_step(at_max, 3.0, cfg).width_mm == 5.0);
}

TEST_CASE("safety guard and domain errors") {
    const ControllerConfig cfg;
    const ControllerState state{20.0, GripDecision::Hold};
    CHECK_THROWS_AS(controller_step(state, 10.5, cfg), AbortError);
    CHECK_THROWS_AS(controller_step(state, -0.1, cfg), DomainError);
    // exactly at the limit is still allowed (strict inequality)
    CHECK_NOTHROW(controller_step(state, 10.0, cfg));
}

TEST_CASE("controller config invariants") {
    ControllerConfig cfg;
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ControllerConfig{};
    cfg.abort_force = 2.05; // inside the deadband
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ControllerConfig{};
    cfg.width_min = cfg.width_max;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("branch partition and step-size property over random readings") {
    const ControllerConfig cfg;
    Rng rng(1001);
    int below = 0, within = 0, above = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const double f = 10.0 * rng.uniform();
        const DeadbandStatus status = deadband_status(f, cfg);
        below += status == DeadbandStatus::Below;
        within += status == DeadbandStatus::Within;
        above += status == DeadbandStatus::Above;
        // exactly one branch fires
        CHECK(((f < cfg.target_force - cfg.epsilon) + (f > cfg.target_force + cfg.epsilon) +
               (status == DeadbandStatus::Within)) == 1);

        const ControllerState state{10.0, GripDecision::Hold};
        const ControllerState next = controller_step(state, f, cfg);
        const double delta = std::abs(next.width_mm - state.width_mm);
        CHECK((delta == 0.0 || delta == cfg.step_mm));
    }
    CHECK(below > 0);
    CHECK(within > 0);
    CHECK(above > 0);
}

TEST_CASE("decision is monotone in the measured force") {
    const ControllerConfig cfg;
    auto rank = [&](double f) {
        switch (deadband_status(f, cfg)) {
            case DeadbandStatus::Below: return 0;
            case DeadbandStatus::Within: return 1;
            case DeadbandStatus::Above: return 2;
        }
        return -1;
    };
    Rng rng(77);
    for (int rep = 0; rep < 2000; ++rep) {
        const double f1 = 5.0 * rng.uniform();
        const double f2 = f1 + 5.0 * rng.uniform();
        CHECK(rank(f1) <= rank(f2));
    }
}

TEST_CASE("abort fires for any reading above the default limit") {
    const ControllerConfig cfg;
    Rng rng(9);
    for (int rep = 0; rep < 100; ++rep) {
        const double f = 10.0 + 1e-9 + 20.0 * rng.uniform();
        CHECK_THROWS_AS(controller_step({15.0, GripDecision::Hold}, f, cfg), AbortError);
    }
}
