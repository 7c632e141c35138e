// detumble: CubeSat detumbling simulator.
//
// Subcommands:
//   simulate  propagate one scenario; emit telemetry CSV and optional SVG plots
//   matrix    run every cubesat x controller x actuation cell; emit verdict CSV
//   verdict   re-judge an existing telemetry CSV against rate thresholds
//
// Exit codes: 0 success, 1 failed verdict under --require-success,
// 2 usage or input errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "detumble/detumble.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw detumble::IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw detumble::IoError("failed reading '" + path + "'");
    return buf.str();
}

std::string brief(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// One human-readable line; the CSVs carry the full-precision values.
void print_summary(std::ostream& out, const detumble::SimResult& result) {
    const detumble::DetumbleVerdict& v = result.verdict;
    if (result.aborted)
        out << "aborted: " << result.abort_reason << "\n";
    out << "success=" << (v.success ? "true" : "false")
        << " final_max_rate=" << brief(v.final_max_rate) << " time_to_converge="
        << (v.time_to_converge ? brief(*v.time_to_converge) : std::string("none"))
        << " stage_switches=";
    if (v.stage_switch_times.empty()) {
        out << "none";
    } else {
        for (size_t i = 0; i < v.stage_switch_times.size(); ++i)
            out << (i ? "," : "") << brief(v.stage_switch_times[i]);
    }
    out << "\n";
}

struct SimulateArgs {
    std::string scenario_path;
    std::string cubesat;
    std::string controller;
    std::string actuation;
    double dt = 0.0;
    double duration = 0.0;
    bool dt_set = false;
    bool duration_set = false;
    std::string out_path;
    std::string plot_prefix;
    bool require_success = false;
};

int run_simulate(const SimulateArgs& args) {
    // Command-line overrides are appended as scenario lines; later keys win,
    // so the flags take precedence over the file.
    std::string text;
    if (!args.scenario_path.empty())
        text = read_text_file(args.scenario_path);
    if (!text.empty() && text.back() != '\n')
        text += '\n';
    if (!args.cubesat.empty())
        text += "cubesat = " + args.cubesat + "\n";
    if (!args.controller.empty())
        text += "controller = " + args.controller + "\n";
    if (!args.actuation.empty())
        text += "actuation = " + args.actuation + "\n";
    if (args.dt_set)
        text += "dt = " + detumble::format_g17(args.dt) + "\n";
    if (args.duration_set)
        text += "duration = " + detumble::format_g17(args.duration) + "\n";

    detumble::ScenarioConfig config = detumble::parse_scenario(text);
    detumble::SimResult result = detumble::propagate(config);

    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path);
        if (!out)
            throw detumble::IoError("cannot open '" + args.out_path + "' for writing");
        detumble::write_csv(result, out);
        print_summary(std::cout, result);
    } else {
        detumble::write_csv(result, std::cout);
        print_summary(std::cerr, result);
    }

    if (!args.plot_prefix.empty()) {
        for (auto [channels, suffix] :
             {std::pair{detumble::PlotChannels::rates, "_rates.svg"},
              std::pair{detumble::PlotChannels::moments, "_moments.svg"}}) {
            std::string path = args.plot_prefix + suffix;
            std::ofstream out(path);
            if (!out)
                throw detumble::IoError("cannot open '" + path + "' for writing");
            detumble::emit_plot(result, channels, out);
        }
    }

    return args.require_success && !result.verdict.success ? 1 : 0;
}

int run_matrix(const std::string& out_path) {
    detumble::VerdictMatrix cells = detumble::run_matrix();
    size_t succeeded = 0;
    for (const detumble::MatrixCell& cell : cells)
        succeeded += cell.verdict.success ? 1 : 0;
    std::ostringstream tally;
    tally << succeeded << "/" << cells.size() << " cells succeeded\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out)
            throw detumble::IoError("cannot open '" + out_path + "' for writing");
        detumble::write_matrix_csv(cells, out);
        std::cout << tally.str();
    } else {
        detumble::write_matrix_csv(cells, std::cout);
        std::cerr << tally.str();
    }
    return 0;
}

int run_verdict(const std::string& in_path, double threshold, double window_fraction,
                bool require_success) {
    std::ifstream in(in_path);
    if (!in)
        throw detumble::IoError("cannot open '" + in_path + "'");
    detumble::SimResult result = detumble::read_csv(in);
    result.verdict = detumble::detumble_verdict(result, threshold, window_fraction);
    print_summary(std::cout, result);
    return require_success && !result.verdict.success ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CubeSat detumbling simulator"};
    app.require_subcommand(1);

    const std::vector<std::string> preset_list(detumble::preset_names.begin(),
                                               detumble::preset_names.end());

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Propagate one detumbling scenario");
    simulate->add_option("--scenario", sim.scenario_path,
                         "scenario file (key = value lines; defaults apply to omitted keys)");
    simulate->add_option("--cubesat", sim.cubesat, "spacecraft preset")
        ->check(CLI::IsMember(preset_list, CLI::ignore_case));
    simulate->add_option("--controller", sim.controller, "rate controller")
        ->check(CLI::IsMember({"prop", "fl", "two-stage"}));
    simulate->add_option("--actuation", sim.actuation, "actuated axes")
        ->check(CLI::IsMember({"full", "under"}));
    simulate->add_option("--dt", sim.dt, "integrator step [s]");
    simulate->add_option("--duration", sim.duration, "simulated time span [s]");
    simulate->add_option("--out", sim.out_path, "telemetry CSV path (default: stdout)");
    simulate->add_option("--plot", sim.plot_prefix,
                         "SVG path prefix; writes <prefix>_rates.svg and <prefix>_moments.svg");
    simulate->add_flag("--require-success", sim.require_success,
                       "exit 1 if the detumble verdict is a failure");

    std::string matrix_out;
    CLI::App* matrix = app.add_subcommand(
        "matrix", "Run the full cubesat x controller x actuation verdict matrix");
    matrix->add_option("--out", matrix_out, "matrix CSV path (default: stdout)");

    std::string verdict_in;
    double threshold = detumble::default_success_threshold;
    double window_fraction = detumble::default_window_fraction;
    bool verdict_require_success = false;
    CLI::App* verdict = app.add_subcommand("verdict", "Re-judge a telemetry CSV");
    verdict->add_option("--in", verdict_in, "telemetry CSV path")->required();
    verdict->add_option("--threshold", threshold, "success rate bound [rad/s]");
    verdict->add_option("--window", window_fraction,
                        "trailing fraction of records the bound must hold over");
    verdict->add_flag("--require-success", verdict_require_success,
                      "exit 1 if the detumble verdict is a failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        sim.dt_set = simulate->count("--dt") > 0;
        sim.duration_set = simulate->count("--duration") > 0;
        if (simulate->parsed())
            return run_simulate(sim);
        if (matrix->parsed())
            return run_matrix(matrix_out);
        return run_verdict(verdict_in, threshold, window_fraction, verdict_require_success);
    } catch (const detumble::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
