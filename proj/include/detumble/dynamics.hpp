#pragma once

// Six-degree-of-freedom rigid-body equations of motion: Euler rotational
// dynamics, quaternion kinematics, point-mass gravity, and the fixed-step
// RK4 integrator core.

#include <cmath>
#include <utility>

#include "detumble/errors.hpp"
#include "detumble/format.hpp"
#include "detumble/linalg.hpp"
#include "detumble/quaternion.hpp"
#include "detumble/spacecraft.hpp"

namespace detumble {

inline constexpr double default_mu = 3.986004418e14; // [m^3/s^2]
inline constexpr double earth_radius_m = 6371393.0;  // [m]

struct GravityModel {
    double mu = default_mu; // [m^3/s^2]

    bool operator==(const GravityModel&) const = default;
};

// Full 13-scalar state: ECI position/velocity, body->ECI attitude quaternion
// and body angular rates w = (p, q, r).
struct RigidBodyState {
    Vec3 position_eci;   // [m]
    Vec3 velocity_eci;   // [m/s]
    Quaternion attitude; // body -> ECI
    Vec3 omega_body;     // [rad/s]

    bool operator==(const RigidBodyState&) const = default;
};

struct StateDerivative {
    Vec3 position_rate;           // [m/s]
    Vec3 velocity_rate;           // [m/s^2]
    QuaternionRate attitude_rate;
    Vec3 omega_rate;              // [rad/s^2]
};

inline bool is_finite(const RigidBodyState& s) {
    return is_finite(s.position_eci) && is_finite(s.velocity_eci) &&
           is_finite(s.attitude) && is_finite(s.omega_body);
}

// Euler's rotational equations for a diagonal inertia tensor, componentwise:
//   p_dot = ((Iy - Iz)*q*r + L) / Ix
//   q_dot = ((Iz - Ix)*p*r + M) / Iy
//   r_dot = ((Ix - Iy)*p*q + N) / Iz
// The componentwise form keeps axisymmetric cases exact: with Ix == Iy and
// N == 0 the yaw-rate derivative is exactly zero, not merely small.
inline Vec3 rotational_acceleration(const Vec3& omega_body, const InertiaTensor& inertia,
                                    const Vec3& moment_body) {
    if (!(inertia.i_x > 0.0) || !(inertia.i_y > 0.0) || !(inertia.i_z > 0.0))
        throw SingularInertia("principal moments must all be positive, got (" +
                              format_g17(inertia.i_x) + ", " + format_g17(inertia.i_y) +
                              ", " + format_g17(inertia.i_z) + ")");
    double p = omega_body.x, q = omega_body.y, r = omega_body.z;
    return {((inertia.i_y - inertia.i_z) * q * r + moment_body.x) / inertia.i_x,
            ((inertia.i_z - inertia.i_x) * p * r + moment_body.y) / inertia.i_y,
            ((inertia.i_x - inertia.i_y) * p * q + moment_body.z) / inertia.i_z};
}

// Point-mass gravity: a = -mu * r / |r|^3 [m/s^2].
inline Vec3 gravitational_acceleration(const Vec3& position_eci, const GravityModel& g) {
    double rn = norm(position_eci);
    // Guards only the physical singularity. Non-finite positions pass
    // through as non-finite accelerations for the integrator to flag.
    if (rn <= 1.0)
        throw OriginSingularity("position is within 1 m of the gravitating center");
    return (-g.mu / (rn * rn * rn)) * position_eci;
}

// Assemble the full state derivative for a given applied body moment.
inline StateDerivative state_derivative(const RigidBodyState& state,
                                        const SpacecraftConfig& config,
                                        const Vec3& moment_body, const GravityModel& g) {
    return {state.velocity_eci,
            gravitational_acceleration(state.position_eci, g),
            quat_derivative(state.attitude, state.omega_body),
            rotational_acceleration(state.omega_body, config.inertia, moment_body)};
}

// y + h*k over all 13 scalars. No attitude renormalization here: the RK4
// stage states are used raw and only the final update is renormalized.
inline RigidBodyState advance(const RigidBodyState& s, const StateDerivative& k, double h) {
    return {s.position_eci + h * k.position_rate,
            s.velocity_eci + h * k.velocity_rate,
            {s.attitude.q0 + h * k.attitude_rate.q0, s.attitude.q1 + h * k.attitude_rate.q1,
             s.attitude.q2 + h * k.attitude_rate.q2, s.attitude.q3 + h * k.attitude_rate.q3},
            s.omega_body + h * k.omega_rate};
}

// Classic 4-stage Runge-Kutta step over all 13 state scalars. The derivative
// evaluator is called at the four stage states; the attitude quaternion is
// renormalized after the combined update (|norm - 1| <= 1e-12 afterwards).
template <typename DerivativeEvaluator>
RigidBodyState rk4_step(const RigidBodyState& state, double dt,
                        DerivativeEvaluator&& derivative) {
    StateDerivative k1 = derivative(state);
    StateDerivative k2 = derivative(advance(state, k1, 0.5 * dt));
    StateDerivative k3 = derivative(advance(state, k2, 0.5 * dt));
    StateDerivative k4 = derivative(advance(state, k3, dt));

    // y_next = y + dt/6 * (k1 + 2*k2 + 2*k3 + k4)
    double h = dt / 6.0;
    auto comb = [h](double y, double a, double b, double c, double d) {
        return y + h * (a + 2.0 * b + 2.0 * c + d);
    };
    RigidBodyState out;
    out.position_eci = {comb(state.position_eci.x, k1.position_rate.x, k2.position_rate.x, k3.position_rate.x, k4.position_rate.x),
                        comb(state.position_eci.y, k1.position_rate.y, k2.position_rate.y, k3.position_rate.y, k4.position_rate.y),
                        comb(state.position_eci.z, k1.position_rate.z, k2.position_rate.z, k3.position_rate.z, k4.position_rate.z)};
    out.velocity_eci = {comb(state.velocity_eci.x, k1.velocity_rate.x, k2.velocity_rate.x, k3.velocity_rate.x, k4.velocity_rate.x),
                        comb(state.velocity_eci.y, k1.velocity_rate.y, k2.velocity_rate.y, k3.velocity_rate.y, k4.velocity_rate.y),
                        comb(state.velocity_eci.z, k1.velocity_rate.z, k2.velocity_rate.z, k3.velocity_rate.z, k4.velocity_rate.z)};
    out.attitude = {comb(state.attitude.q0, k1.attitude_rate.q0, k2.attitude_rate.q0, k3.attitude_rate.q0, k4.attitude_rate.q0),
                    comb(state.attitude.q1, k1.attitude_rate.q1, k2.attitude_rate.q1, k3.attitude_rate.q1, k4.attitude_rate.q1),
                    comb(state.attitude.q2, k1.attitude_rate.q2, k2.attitude_rate.q2, k3.attitude_rate.q2, k4.attitude_rate.q2),
                    comb(state.attitude.q3, k1.attitude_rate.q3, k2.attitude_rate.q3, k3.attitude_rate.q3, k4.attitude_rate.q3)};
    out.omega_body = {comb(state.omega_body.x, k1.omega_rate.x, k2.omega_rate.x, k3.omega_rate.x, k4.omega_rate.x),
                      comb(state.omega_body.y, k1.omega_rate.y, k2.omega_rate.y, k3.omega_rate.y, k4.omega_rate.y),
                      comb(state.omega_body.z, k1.omega_rate.z, k2.omega_rate.z, k3.omega_rate.z, k4.omega_rate.z)};

    if (!is_finite(out))
        throw NonFiniteState("non-finite state after RK4 step");
    out.attitude = quat_normalize(out.attitude);
    return out;
}

} // namespace detumble
