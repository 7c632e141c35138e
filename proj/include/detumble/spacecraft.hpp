#pragma once

// Spacecraft physical configuration: principal inertias for the catalog of
// CubeSat shapes, the per-axis actuation mask, and optional moment saturation.

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>

#include "detumble/errors.hpp"
#include "detumble/linalg.hpp"

namespace detumble {

// Diagonal inertia tensor in body principal axes [kg*m^2].
struct InertiaTensor {
    double i_x = 0.0;
    double i_y = 0.0;
    double i_z = 0.0;

    bool operator==(const InertiaTensor&) const = default;
};

// Per-axis enable flags mapping commanded moments to applied moments.
struct ActuationMask {
    bool roll_enabled = true;
    bool pitch_enabled = true;
    bool yaw_enabled = true;

    bool operator==(const ActuationMask&) const = default;
};

inline constexpr ActuationMask fully_actuated{true, true, true};
// The underactuated case has no yaw-axis torque.
inline constexpr ActuationMask underactuated{true, true, false};

struct SpacecraftConfig {
    std::string name;
    double mass = 0.0; // [kg]
    InertiaTensor inertia;
    ActuationMask actuation;
    std::optional<double> moment_limit; // per-axis saturation [N*m]; none = unsaturated

    bool operator==(const SpacecraftConfig&) const = default;
};

inline std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return (char)std::tolower(c); });
    return s;
}

inline constexpr std::array<const char*, 4> preset_names{"1u", "2u-upright",
                                                         "2u-sideways", "6u"};

// Catalog of CubeSat configurations (mass [kg], principal inertias [kg*m^2]).
// Names are case-insensitive; returned fully actuated with no saturation.
inline SpacecraftConfig preset(const std::string& name) {
    std::string key = lowercased(name);
    if (key == "1u")
        return {"1u", 2.0, {0.0033, 0.0033, 0.0033}, fully_actuated, {}};
    if (key == "2u-upright")
        return {"2u-upright", 4.0, {0.0167, 0.0167, 0.0067}, fully_actuated, {}};
    if (key == "2u-sideways")
        return {"2u-sideways", 4.0, {0.0067, 0.0167, 0.0167}, fully_actuated, {}};
    if (key == "6u")
        return {"6u", 12.0, {0.13, 0.10, 0.05}, fully_actuated, {}};
    throw UnknownPreset("unknown cubesat preset '" + name +
                        "' (expected one of 1u, 2u-upright, 2u-sideways, 6u)");
}

// Zero each disabled axis, then clamp each surviving component to ±limit.
inline Vec3 apply_actuation(const Vec3& commanded, const SpacecraftConfig& config) {
    Vec3 m{config.actuation.roll_enabled ? commanded.x : 0.0,
           config.actuation.pitch_enabled ? commanded.y : 0.0,
           config.actuation.yaw_enabled ? commanded.z : 0.0};
    if (config.moment_limit) {
        double lim = *config.moment_limit;
        m.x = std::clamp(m.x, -lim, lim);
        m.y = std::clamp(m.y, -lim, lim);
        m.z = std::clamp(m.z, -lim, lim);
    }
    return m;
}

} // namespace detumble
