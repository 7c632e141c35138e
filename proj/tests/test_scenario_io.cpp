// Scenario file parsing/rendering, telemetry CSV round trips, SVG plots,
// and the circular-orbit helper.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "detumble/scenario.hpp"
#include "detumble/simulation.hpp"
#include "detumble/svg_plot.hpp"
#include "detumble/telemetry.hpp"

using namespace detumble;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::mt19937 rng(57721566u);

double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

ScenarioConfig random_config() {
    ScenarioConfig config;
    config.spacecraft = preset(preset_names[(size_t)pick(4)]);
    config.spacecraft.actuation = pick(2) == 0 ? fully_actuated : underactuated;
    if (pick(2) == 0)
        config.spacecraft.moment_limit = uniform(0.01, 1.0);

    GainMatrix gains{uniform(-5.0, -0.1), uniform(-5.0, -0.1), uniform(-5.0, -0.1)};
    switch (pick(3)) {
    case 0:
        config.controller = Proportional{gains};
        break;
    case 1:
        config.controller = FeedbackLinearized{gains};
        break;
    default:
        TwoStageParams params;
        params.p_command = (pick(2) == 0 ? 1.0 : -1.0) * uniform(0.1, 1.0);
        params.epsilon = uniform(0.001, 0.05);
        params.q_command_limit = uniform(0.5, 2.0);
        params.denominator_floor = uniform(1e-8, 1e-4);
        config.controller = TwoStage{gains, params};
        break;
    }

    RigidBodyState& s = config.initial_state;
    s.position_eci = {uniform(-1e5, 1e5) + 6.9e6, uniform(-1e5, 1e5), uniform(-1e5, 1e5)};
    s.velocity_eci = {uniform(-8e3, 8e3), uniform(-8e3, 8e3), uniform(-8e3, 8e3)};
    std::normal_distribution<double> gauss(0.0, 1.0);
    s.attitude = quat_normalize({gauss(rng), gauss(rng), gauss(rng), gauss(rng)});
    s.omega_body = {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};

    config.dt = uniform(0.001, 0.1);
    config.duration = config.dt * (double)(1 + pick(2000));
    config.mu = uniform(3e14, 5e14);
    config.output_decimation = 1 + pick(10);
    return config;
}

} // namespace

TEST_CASE("empty scenario input yields the documented defaults", "[scenario-io]") {
    ScenarioConfig config = parse_scenario(std::string{});

    REQUIRE(config.initial_state.position_eci == Vec3{6871393.0, 0.0, 0.0});
    REQUIRE(config.initial_state.attitude == Quaternion{1.0, 0.0, 0.0, 0.0});
    REQUIRE(config.initial_state.velocity_eci == Vec3{0.0, 7616.18, 0.0});
    REQUIRE(config.initial_state.omega_body == Vec3{0.2, 0.2, 0.2});

    REQUIRE(config.spacecraft == preset("1u"));
    REQUIRE(config.controller ==
            ControllerSpec{Proportional{{-2.0 * 0.0033, -2.0 * 0.0033, -2.0 * 0.0033}}});
    REQUIRE(config.dt == 0.01);
    REQUIRE(config.duration == 10.0);
    REQUIRE(config.mu == 3.986004418e14);
    REQUIRE(config.output_decimation == 1);
}

TEST_CASE("scenario keys override the defaults", "[scenario-io]") {
    SECTION("cubesat selection rescales the default proportional gains") {
        ScenarioConfig config = parse_scenario(std::string{"cubesat = 6u\n"});
        REQUIRE(config.spacecraft.inertia == InertiaTensor{0.13, 0.10, 0.05});
        REQUIRE(controller_gains(config.controller) ==
                GainMatrix{-2.0 * 0.13, -2.0 * 0.10, -2.0 * 0.05});
    }

    SECTION("controller choice drives the default duration") {
        REQUIRE(parse_scenario(std::string{"controller = two-stage\n"}).duration == 20.0);
        REQUIRE(parse_scenario(std::string{"controller = fl\n"}).duration == 10.0);
        REQUIRE(parse_scenario(std::string{"controller = two-stage\nduration = 7.5\n"})
                    .duration == 7.5);
    }

    SECTION("tokens are case-insensitive, two_stage is accepted") {
        ScenarioConfig config =
            parse_scenario(std::string{"CUBESAT = 2U-Sideways\nController = TWO_STAGE\n"});
        REQUIRE(config.spacecraft.name == "2u-sideways");
        REQUIRE(controller_kind(config.controller) == ControllerKind::two_stage);
    }

    SECTION("explicit gains and two-stage parameters") {
        ScenarioConfig config = parse_scenario(std::string{
            "controller = two-stage\nk_pp = -3\nk_pr = -0.5\nepsilon = 0.02\n"
            "p_command = 0.7\nq_command_limit = 1.5\ndenominator_floor = 1e-7\n"});
        const auto& two = std::get<TwoStage>(config.controller);
        REQUIRE(two.gains == GainMatrix{-3.0, -2.0, -0.5}); // k_pq keeps its default
        REQUIRE(two.params.epsilon == 0.02);
        REQUIRE(two.params.p_command == 0.7);
        REQUIRE(two.params.q_command_limit == 1.5);
        REQUIRE(two.params.denominator_floor == 1e-7);
    }

    SECTION("state, actuation and integration keys") {
        ScenarioConfig config = parse_scenario(std::string{
            "x0 = 7000000\nwz0 = -0.3\nactuation = under\nmoment_limit = 0.25\n"
            "dt = 0.02\nmu = 4e14\noutput_decimation = 5\n"});
        REQUIRE(config.initial_state.position_eci.x == 7000000.0);
        REQUIRE(config.initial_state.omega_body.z == -0.3);
        REQUIRE(config.spacecraft.actuation == underactuated);
        REQUIRE(config.spacecraft.moment_limit == 0.25);
        REQUIRE(config.dt == 0.02);
        REQUIRE(config.mu == 4e14);
        REQUIRE(config.output_decimation == 5);
    }

    SECTION("comments, blank lines, duplicate keys (last wins)") {
        ScenarioConfig config = parse_scenario(std::string{
            "# full-line comment\n\n  dt = 0.5  # trailing comment\ndt = 0.25\n"});
        REQUIRE(config.dt == 0.25);
    }

    SECTION("a non-unit initial quaternion is normalized on ingest") {
        ScenarioConfig config = parse_scenario(std::string{"q0 = 2\n"});
        REQUIRE(config.initial_state.attitude == Quaternion{1.0, 0.0, 0.0, 0.0});
    }
}

TEST_CASE("scenario parse errors carry line numbers", "[scenario-io]") {
    auto expect_parse_error = [](const std::string& text, int line) {
        try {
            parse_scenario(text);
            FAIL("expected ParseError for: " << text);
        } catch (const ParseError& e) {
            REQUIRE(e.line == line);
        }
    };

    expect_parse_error("bogus_key = 1\n", 1);
    expect_parse_error("dt = 0.01\nno equals sign here\n", 2);
    expect_parse_error("dt = not-a-number\n", 1);
    expect_parse_error("dt =\n", 1);
    expect_parse_error("= 0.5\n", 1);
    expect_parse_error("cubesat = 9u\n", 1);
    expect_parse_error("controller = pid\n", 1);
    expect_parse_error("actuation = both\n", 1);
    expect_parse_error("output_decimation = 2.5\n", 1);
    expect_parse_error("dt = 0.01\n\n# fine\nwx0 = 1e\n", 4);
}

TEST_CASE("scenario validation rejects invariant violations", "[scenario-io]") {
    REQUIRE_THROWS_AS(parse_scenario(std::string{"dt = -1\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"dt = 0\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"duration = 0.001\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"output_decimation = 0\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"mu = -3e14\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"k_pp = 0\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"k_pq = 1.5\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"moment_limit = -0.1\n"}), ValidationError);
    REQUIRE_THROWS_AS(
        parse_scenario(std::string{"controller = two-stage\nepsilon = -0.01\n"}),
        ValidationError);
    REQUIRE_THROWS_AS(
        parse_scenario(std::string{"controller = two-stage\np_command = 0\n"}),
        ValidationError);
    REQUIRE_THROWS_AS(
        parse_scenario(std::string{"q0 = 0\nq1 = 1e-12\nq2 = 0\nq3 = 0\n"}), ValidationError);
    REQUIRE_THROWS_AS(parse_scenario(std::string{"x0 = 0\ny0 = 0\nz0 = 0\n"}), ValidationError);
}

TEST_CASE("render_scenario round-trips through parse_scenario", "[scenario-io]") {
    for (int trial = 0; trial < 200; ++trial) {
        ScenarioConfig config = random_config();
        ScenarioConfig reparsed = parse_scenario(render_scenario(config));
        REQUIRE(reparsed == config);
    }

    // Spacecraft outside the catalog cannot be expressed in the file format.
    ScenarioConfig custom;
    custom.spacecraft = preset("1u");
    custom.spacecraft.inertia.i_x = 0.004;
    REQUIRE_THROWS_AS(render_scenario(custom), ValidationError);
}

TEST_CASE("telemetry CSV is bit-exact over a round trip", "[scenario-io]") {
    ScenarioConfig config = parse_scenario(std::string{"controller = two-stage\n"
                                                       "cubesat = 2u-sideways\n"
                                                       "actuation = under\n"});
    SimResult result = propagate(config);

    std::ostringstream sink;
    write_csv(result, sink);
    std::istringstream source(sink.str());
    SimResult reread = read_csv(source);

    REQUIRE(reread.records.size() == result.records.size());
    for (size_t i = 0; i < result.records.size(); ++i)
        REQUIRE(reread.records[i] == result.records[i]);

    // Same bytes again on a second write.
    std::ostringstream again;
    write_csv(result, again);
    REQUIRE(again.str() == sink.str());
}

TEST_CASE("telemetry CSV shape", "[scenario-io]") {
    SECTION("single record gives header plus one row") {
        SimResult result;
        result.records.push_back({});
        std::ostringstream sink;
        write_csv(result, sink);
        std::istringstream lines(sink.str());
        std::string line;
        std::vector<std::string> all;
        while (std::getline(lines, line))
            all.push_back(line);
        REQUIRE(all.size() == 2);
        REQUIRE(all[0] == telemetry_csv_header);
    }

    SECTION("default 10 s run emits 1002 lines") {
        SimResult result = propagate(parse_scenario(std::string{}));
        std::ostringstream sink;
        write_csv(result, sink);
        size_t newlines = 0;
        for (char c : sink.str())
            newlines += c == '\n' ? 1 : 0;
        REQUIRE(newlines == 1002);
    }

    SECTION("every row has 18 fields and a stage in {0,1,2}") {
        ScenarioConfig config = parse_scenario(std::string{"controller = two-stage\n"
                                                           "cubesat = 6u\n"
                                                           "actuation = under\n"});
        SimResult result = propagate(config);
        std::ostringstream sink;
        write_csv(result, sink);
        std::istringstream lines(sink.str());
        std::string line;
        std::getline(lines, line); // header
        bool saw_stage_two = false;
        while (std::getline(lines, line)) {
            size_t commas = 0;
            for (char c : line)
                commas += c == ',' ? 1 : 0;
            REQUIRE(commas == 17);
            char stage = line.back();
            REQUIRE((stage == '0' || stage == '1' || stage == '2'));
            saw_stage_two = saw_stage_two || stage == '2';
        }
        REQUIRE(saw_stage_two);
    }

    SECTION("writing an empty result is refused") {
        SimResult empty;
        std::ostringstream sink;
        REQUIRE_THROWS_AS(write_csv(empty, sink), IoError);
    }
}

TEST_CASE("telemetry CSV reader rejects malformed input", "[scenario-io]") {
    auto read_text = [](const std::string& text) {
        std::istringstream source(text);
        return read_csv(source);
    };

    REQUIRE_THROWS_AS(read_text(""), ParseError);
    REQUIRE_THROWS_AS(read_text("t,px,py\n"), ParseError);

    std::string header(telemetry_csv_header);
    REQUIRE_THROWS_AS(read_text(header + "\n1,2,3\n"), ParseError);
    REQUIRE_THROWS_AS(
        read_text(header + "\n0,0,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,zero\n"), ParseError);
    REQUIRE_THROWS_AS(
        read_text(header + "\n0,0,0,0,oops,0,0,0,0,0,0,0,0,0,0,0,0,0\n"), ParseError);

    // Blank lines and CRLF endings are tolerated.
    SimResult ok = read_text(header + "\r\n\n0,1,2,3,1,0,0,0,4,5,6,7,8,9,10,11,12,1\r\n");
    REQUIRE(ok.records.size() == 1);
    REQUIRE(ok.records[0].stage == 1);
    REQUIRE(ok.records[0].moment_applied == Vec3{10.0, 11.0, 12.0});
}

TEST_CASE("SVG plots are deterministic and well-formed", "[scenario-io]") {
    ScenarioConfig config = parse_scenario(std::string{"actuation = under\n"});
    SimResult result = propagate(config);

    std::ostringstream first;
    std::ostringstream second;
    emit_plot(result, PlotChannels::rates, first);
    emit_plot(result, PlotChannels::rates, second);
    REQUIRE(first.str() == second.str());
    REQUIRE(first.str().rfind("<svg", 0) == 0);
    REQUIRE(first.str().find("</svg>") != std::string::npos);

    size_t polylines = 0;
    for (size_t at = first.str().find("<polyline"); at != std::string::npos;
         at = first.str().find("<polyline", at + 1))
        ++polylines;
    REQUIRE(polylines == 3);

    SECTION("the unactuated yaw channel plots as a flat line") {
        std::ostringstream moments;
        emit_plot(result, PlotChannels::moments, moments);
        std::string svg = moments.str();
        // Third polyline = N; every point shares one y coordinate.
        size_t at = std::string::npos;
        for (int i = 0; i < 3; ++i)
            at = svg.find("points=\"", at == std::string::npos ? 0 : at + 1);
        REQUIRE(at != std::string::npos);
        size_t end = svg.find('"', at + 8);
        std::istringstream points(svg.substr(at + 8, end - at - 8));
        std::string pair;
        std::string y_seen;
        while (points >> pair) {
            std::string y = pair.substr(pair.find(',') + 1);
            if (y_seen.empty())
                y_seen = y;
            REQUIRE(y == y_seen);
        }
        REQUIRE_FALSE(y_seen.empty());
    }

    SECTION("fewer than two records cannot be plotted") {
        SimResult tiny;
        tiny.records.push_back({});
        std::ostringstream sink;
        REQUIRE_THROWS_AS(emit_plot(tiny, PlotChannels::rates, sink), IoError);
    }
}

TEST_CASE("circular_orbit_speed", "[scenario-io]") {
    double v = circular_orbit_speed(500e3);
    REQUIRE_THAT(v, WithinAbs(7616.35, 0.01));

    // Square-root scalings.
    REQUIRE(circular_orbit_speed(500e3, 4.0 * default_mu) == 2.0 * v);
    double r = earth_radius_m + 500e3;
    double doubled_r_altitude = 2.0 * r - earth_radius_m;
    REQUIRE_THAT(circular_orbit_speed(doubled_r_altitude), WithinRel(v / std::sqrt(2.0), 1e-12));
}
