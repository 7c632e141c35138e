#pragma once

// Scenario configuration: the key = value initial-conditions file format,
// its defaults, validation, and the circular-orbit helper.

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "detumble/control.hpp"
#include "detumble/dynamics.hpp"
#include "detumble/errors.hpp"
#include "detumble/format.hpp"
#include "detumble/spacecraft.hpp"

namespace detumble {

// Default initial conditions: 500 km circular equatorial orbit along +x,
// identity attitude, and a 0.2 rad/s tumble on every body axis.
inline RigidBodyState default_initial_state() {
    RigidBodyState s;
    s.position_eci = {earth_radius_m + 500e3, 0.0, 0.0}; // [m]
    s.velocity_eci = {0.0, 7616.18, 0.0};                // [m/s]
    s.attitude = {1.0, 0.0, 0.0, 0.0};
    s.omega_body = {0.2, 0.2, 0.2};                      // [rad/s]
    return s;
}

struct ScenarioConfig {
    RigidBodyState initial_state = default_initial_state();
    SpacecraftConfig spacecraft = preset("1u");
    ControllerSpec controller =
        Proportional{default_gains(ControllerKind::proportional, preset("1u").inertia)};
    double dt = 0.01;          // [s]
    double duration = 10.0;    // [s]
    double mu = default_mu;    // [m^3/s^2]
    int output_decimation = 1; // record every Nth step

    bool operator==(const ScenarioConfig&) const = default;
};

inline ScenarioConfig default_scenario() {
    return {};
}

// Speed of a circular orbit at the given altitude: sqrt(mu / (R + h)).
inline double circular_orbit_speed(double altitude, double mu = default_mu,
                                   double earth_radius = earth_radius_m) {
    return std::sqrt(mu / (earth_radius + altitude));
}

// Invariant checks shared by the parser and programmatic callers. Throws
// ValidationError naming the offending quantity.
inline void validate_scenario(const ScenarioConfig& config) {
    if (!(config.dt > 0.0))
        throw ValidationError("dt must be > 0");
    if (!(config.duration >= config.dt))
        throw ValidationError("duration must be >= dt");
    if (config.output_decimation < 1)
        throw ValidationError("output_decimation must be >= 1");
    if (!(config.mu > 0.0))
        throw ValidationError("mu must be > 0");

    const SpacecraftConfig& craft = config.spacecraft;
    if (!(craft.mass > 0.0))
        throw ValidationError("spacecraft mass must be > 0");
    const InertiaTensor& inertia = craft.inertia;
    if (!(inertia.i_x > 0.0) || !(inertia.i_y > 0.0) || !(inertia.i_z > 0.0))
        throw ValidationError("principal inertias must all be > 0");
    if (inertia.i_x + inertia.i_y < inertia.i_z || inertia.i_y + inertia.i_z < inertia.i_x ||
        inertia.i_z + inertia.i_x < inertia.i_y)
        throw ValidationError("principal inertias violate the triangle inequality");
    if (!craft.actuation.roll_enabled && !craft.actuation.pitch_enabled &&
        !craft.actuation.yaw_enabled)
        throw ValidationError("at least one actuation axis must be enabled");
    if (craft.moment_limit && !(*craft.moment_limit > 0.0))
        throw ValidationError("moment_limit must be > 0");

    const GainMatrix& gains = controller_gains(config.controller);
    if (!(gains.k_pp < 0.0) || !(gains.k_pq < 0.0) || !(gains.k_pr < 0.0))
        throw ValidationError("gains k_pp, k_pq, k_pr must all be strictly negative");
    if (const auto* two = std::get_if<TwoStage>(&config.controller)) {
        if (!(std::abs(two->params.p_command) > 0.0))
            throw ValidationError("p_command must be nonzero");
        if (!(two->params.epsilon > 0.0))
            throw ValidationError("epsilon must be > 0");
        if (!(two->params.q_command_limit > 0.0))
            throw ValidationError("q_command_limit must be > 0");
        if (!(two->params.denominator_floor > 0.0))
            throw ValidationError("denominator_floor must be > 0");
    }

    if (!(std::abs(norm(config.initial_state.attitude) - 1.0) <= 1e-9))
        throw ValidationError("initial quaternion must be unit-norm");
    if (!(norm(config.initial_state.position_eci) > 1.0))
        throw ValidationError("initial position is at the gravitating center");
}

namespace scenario_detail {

struct RawValue {
    std::string text;
    int line = 0;
};

using RawMap = std::map<std::string, RawValue>;

inline std::string trimmed(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos)
        return "";
    size_t end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

inline double to_double(const RawValue& raw, const std::string& key) {
    double value = 0.0;
    const char* begin = raw.text.data();
    const char* end = begin + raw.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(raw.line, "key '" + key + "' expects a number, got '" + raw.text + "'");
    return value;
}

inline int to_int(const RawValue& raw, const std::string& key) {
    int value = 0;
    const char* begin = raw.text.data();
    const char* end = begin + raw.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(raw.line, "key '" + key + "' expects an integer, got '" + raw.text + "'");
    return value;
}

// Split "key = value" lines, dropping '#' comments and blank lines. Later
// occurrences of a key override earlier ones.
inline RawMap tokenize(std::istream& text) {
    RawMap raw;
    std::string line;
    int line_number = 0;
    while (std::getline(text, line)) {
        ++line_number;
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::string content = trimmed(line);
        if (content.empty())
            continue;
        size_t eq = content.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_number, "expected 'key = value', got '" + content + "'");
        std::string key = lowercased(trimmed(content.substr(0, eq)));
        std::string value = trimmed(content.substr(eq + 1));
        if (key.empty())
            throw ParseError(line_number, "missing key before '='");
        if (value.empty())
            throw ParseError(line_number, "key '" + key + "' has no value");
        raw[key] = {value, line_number};
    }
    return raw;
}

} // namespace scenario_detail

// Parse the flat key = value scenario format. Unspecified keys take the
// documented defaults; the duration default depends on the controller type
// (10 s, or 20 s for two-stage); unspecified gains default per controller
// and spacecraft. Throws ParseError (with line number) for malformed text
// and ValidationError for invariant violations.
inline ScenarioConfig parse_scenario(std::istream& text) {
    using scenario_detail::RawValue;
    scenario_detail::RawMap raw = scenario_detail::tokenize(text);

    auto take = [&raw](const char* key) -> const RawValue* {
        auto it = raw.find(key);
        if (it == raw.end())
            return nullptr;
        return &it->second;
    };
    auto take_double = [&](const char* key, double fallback) {
        const RawValue* v = take(key);
        return v ? scenario_detail::to_double(*v, key) : fallback;
    };

    ScenarioConfig config;

    // Spacecraft first: default gains depend on the chosen inertias.
    if (const RawValue* v = take("cubesat")) {
        try {
            config.spacecraft = preset(v->text);
        } catch (const UnknownPreset& e) {
            throw ParseError(v->line, e.what());
        }
    }
    if (const RawValue* v = take("actuation")) {
        std::string token = lowercased(v->text);
        if (token == "full")
            config.spacecraft.actuation = fully_actuated;
        else if (token == "under")
            config.spacecraft.actuation = underactuated;
        else
            throw ParseError(v->line, "actuation must be 'full' or 'under', got '" + v->text + "'");
    }
    if (const RawValue* v = take("moment_limit"))
        config.spacecraft.moment_limit = scenario_detail::to_double(*v, "moment_limit");

    ControllerKind kind = ControllerKind::proportional;
    if (const RawValue* v = take("controller")) {
        std::string token = lowercased(v->text);
        if (token == "prop")
            kind = ControllerKind::proportional;
        else if (token == "fl")
            kind = ControllerKind::feedback_linearized;
        else if (token == "two-stage" || token == "two_stage")
            kind = ControllerKind::two_stage;
        else
            throw ParseError(v->line,
                             "controller must be 'prop', 'fl' or 'two-stage', got '" + v->text + "'");
    }

    GainMatrix gains = default_gains(kind, config.spacecraft.inertia);
    gains.k_pp = take_double("k_pp", gains.k_pp);
    gains.k_pq = take_double("k_pq", gains.k_pq);
    gains.k_pr = take_double("k_pr", gains.k_pr);

    TwoStageParams params;
    params.p_command = take_double("p_command", params.p_command);
    params.epsilon = take_double("epsilon", params.epsilon);
    params.q_command_limit = take_double("q_command_limit", params.q_command_limit);
    params.denominator_floor = take_double("denominator_floor", params.denominator_floor);

    switch (kind) {
    case ControllerKind::proportional:
        config.controller = Proportional{gains};
        break;
    case ControllerKind::feedback_linearized:
        config.controller = FeedbackLinearized{gains};
        break;
    case ControllerKind::two_stage:
        config.controller = TwoStage{gains, params};
        break;
    }

    RigidBodyState& state = config.initial_state;
    state.position_eci.x = take_double("x0", state.position_eci.x);
    state.position_eci.y = take_double("y0", state.position_eci.y);
    state.position_eci.z = take_double("z0", state.position_eci.z);
    state.attitude.q0 = take_double("q0", state.attitude.q0);
    state.attitude.q1 = take_double("q1", state.attitude.q1);
    state.attitude.q2 = take_double("q2", state.attitude.q2);
    state.attitude.q3 = take_double("q3", state.attitude.q3);
    state.velocity_eci.x = take_double("u0", state.velocity_eci.x);
    state.velocity_eci.y = take_double("v0", state.velocity_eci.y);
    state.velocity_eci.z = take_double("w0", state.velocity_eci.z);
    state.omega_body.x = take_double("wx0", state.omega_body.x);
    state.omega_body.y = take_double("wy0", state.omega_body.y);
    state.omega_body.z = take_double("wz0", state.omega_body.z);

    config.dt = take_double("dt", config.dt);
    config.duration = take_double("duration", kind == ControllerKind::two_stage ? 20.0 : 10.0);
    config.mu = take_double("mu", config.mu);
    if (const RawValue* v = take("output_decimation"))
        config.output_decimation = scenario_detail::to_int(*v, "output_decimation");

    static const char* known[] = {"x0", "y0", "z0", "q0", "q1", "q2", "q3",
                                  "u0", "v0", "w0", "wx0", "wy0", "wz0",
                                  "cubesat", "actuation", "moment_limit", "controller",
                                  "k_pp", "k_pq", "k_pr",
                                  "p_command", "epsilon", "q_command_limit", "denominator_floor",
                                  "dt", "duration", "mu", "output_decimation"};
    for (const auto& [key, value] : raw) {
        bool recognized = false;
        for (const char* k : known)
            recognized = recognized || key == k;
        if (!recognized)
            throw ParseError(value.line, "unknown key '" + key + "'");
    }

    // Hygiene: accept a non-unit initial quaternion and renormalize it, but
    // leave already-unit values untouched so renders round-trip bit-exactly.
    double qn = norm(state.attitude);
    if (!(qn > 1e-9))
        throw ValidationError("initial quaternion norm is too small to normalize");
    if (std::abs(qn - 1.0) > 1e-12)
        state.attitude = quat_normalize(state.attitude);

    validate_scenario(config);
    return config;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
    std::istringstream stream(text);
    return parse_scenario(stream);
}

// Inverse of parse_scenario for configurations the format can express
// (catalog spacecraft, full/under actuation). parse(render(config)) == config.
inline std::string render_scenario(const ScenarioConfig& config) {
    const SpacecraftConfig& craft = config.spacecraft;
    SpacecraftConfig catalog = preset(craft.name);
    catalog.actuation = craft.actuation;
    catalog.moment_limit = craft.moment_limit;
    if (!(catalog == craft))
        throw ValidationError("scenario format cannot express a non-catalog spacecraft");
    std::string actuation_token;
    if (craft.actuation == fully_actuated)
        actuation_token = "full";
    else if (craft.actuation == underactuated)
        actuation_token = "under";
    else
        throw ValidationError("scenario format cannot express this actuation mask");

    std::ostringstream out;
    auto emit = [&out](const char* key, double value) {
        out << key << " = " << format_g17(value) << "\n";
    };

    out << "# detumble scenario\n";
    const RigidBodyState& s = config.initial_state;
    emit("x0", s.position_eci.x);
    emit("y0", s.position_eci.y);
    emit("z0", s.position_eci.z);
    emit("q0", s.attitude.q0);
    emit("q1", s.attitude.q1);
    emit("q2", s.attitude.q2);
    emit("q3", s.attitude.q3);
    emit("u0", s.velocity_eci.x);
    emit("v0", s.velocity_eci.y);
    emit("w0", s.velocity_eci.z);
    emit("wx0", s.omega_body.x);
    emit("wy0", s.omega_body.y);
    emit("wz0", s.omega_body.z);

    out << "cubesat = " << craft.name << "\n";
    out << "actuation = " << actuation_token << "\n";
    if (craft.moment_limit)
        emit("moment_limit", *craft.moment_limit);

    out << "controller = " << controller_token(controller_kind(config.controller)) << "\n";
    const GainMatrix& gains = controller_gains(config.controller);
    emit("k_pp", gains.k_pp);
    emit("k_pq", gains.k_pq);
    emit("k_pr", gains.k_pr);
    if (const auto* two = std::get_if<TwoStage>(&config.controller)) {
        emit("p_command", two->params.p_command);
        emit("epsilon", two->params.epsilon);
        emit("q_command_limit", two->params.q_command_limit);
        emit("denominator_floor", two->params.denominator_floor);
    }

    emit("dt", config.dt);
    emit("duration", config.duration);
    emit("mu", config.mu);
    out << "output_decimation = " << config.output_decimation << "\n";
    return out.str();
}

} // namespace detumble
