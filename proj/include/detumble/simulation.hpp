#pragma once

// Closed-loop propagation: fixed-step RK4 over the full rigid-body state
// with the controller evaluated inside the integrator stages, and the
// two-stage FSM advanced once per step.

#include <cmath>
#include <variant>

#include "detumble/control.hpp"
#include "detumble/dynamics.hpp"
#include "detumble/scenario.hpp"
#include "detumble/telemetry.hpp"
#include "detumble/verdict.hpp"

namespace detumble {

namespace sim_detail {

// Instantaneous applied moment for the given body rates, with the two-stage
// FSM state held fixed. Shared by the RK4 stage derivatives and the
// telemetry record for the same instant.
inline Vec3 applied_moment(const ControllerSpec& controller, const SpacecraftConfig& craft,
                           const Vec3& omega, TwoStageState fsm) {
    const RateCommand detumbled{}; // target rates w_c = 0
    Vec3 m;
    if (const auto* prop = std::get_if<Proportional>(&controller)) {
        m = proportional_command(omega, detumbled, prop->gains);
    } else if (const auto* fl = std::get_if<FeedbackLinearized>(&controller)) {
        m = feedback_linearized_command(omega, detumbled, fl->gains, craft.inertia);
    } else {
        const auto& two = std::get<TwoStage>(controller);
        m = two_stage_command(omega, two.gains, craft.inertia, two.params, fsm).moment;
    }
    return apply_actuation(m, craft);
}

} // namespace sim_detail

// Run the scenario from t = 0 through t = duration. Each step closes the
// loop inside the integrator: every RK4 stage recomputes the controller
// moment from its own stage rates (through the actuation mask and
// saturation), while the FSM stage is frozen for the whole step and the
// transition — decided from the pre-step rates — is applied afterwards.
// Telemetry keeps every output_decimation-th step, always including t = 0;
// each record carries the moment applied at that instant and the FSM stage
// that produced it (0 for the stageless controllers). A non-finite state
// aborts the run, retaining the telemetry accumulated so far, and an
// aborted run's verdict is never a success.
inline SimResult propagate(const ScenarioConfig& config) {
    SimResult result;
    const SpacecraftConfig& craft = config.spacecraft;
    const GravityModel gravity{config.mu};
    const bool staged = std::holds_alternative<TwoStage>(config.controller);

    RigidBodyState state = config.initial_state;
    TwoStageState fsm;

    const long long steps = std::llround(config.duration / config.dt);
    for (long long k = 0;; ++k) {
        if (k % config.output_decimation == 0) {
            TelemetryRecord rec;
            rec.t = (double)k * config.dt;
            rec.position_eci = state.position_eci;
            rec.quaternion = state.attitude;
            rec.velocity_eci = state.velocity_eci;
            rec.omega_body = state.omega_body;
            rec.moment_applied =
                sim_detail::applied_moment(config.controller, craft, state.omega_body, fsm);
            rec.stage = staged ? (int)fsm.stage : 0;
            result.records.push_back(rec);
        }
        if (k == steps)
            break;

        TwoStageState next = fsm;
        if (staged) {
            const auto& two = std::get<TwoStage>(config.controller);
            next = two_stage_command(state.omega_body, two.gains, craft.inertia, two.params, fsm)
                       .next;
        }
        try {
            state = rk4_step(state, config.dt, [&](const RigidBodyState& s) {
                Vec3 m = sim_detail::applied_moment(config.controller, craft, s.omega_body, fsm);
                return state_derivative(s, craft, m, gravity);
            });
        } catch (const NonFiniteState& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            break;
        } catch (const DegenerateQuaternion& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            break;
        } catch (const OriginSingularity& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            break;
        }
        fsm = next;
    }
    result.verdict = detumble_verdict(result);
    return result;
}

} // namespace detumble
