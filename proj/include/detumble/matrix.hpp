#pragma once

// The controller-vs-configuration verdict matrix: every catalog spacecraft
// against every applicable controller/actuation pairing, with one detumble
// verdict per cell.

#include <ostream>
#include <string>
#include <vector>

#include "detumble/control.hpp"
#include "detumble/format.hpp"
#include "detumble/scenario.hpp"
#include "detumble/simulation.hpp"
#include "detumble/spacecraft.hpp"

namespace detumble {

struct MatrixCell {
    std::string cubesat;
    ControllerKind controller = ControllerKind::proportional;
    ActuationMask actuation;
    DetumbleVerdict verdict;
};

using VerdictMatrix = std::vector<MatrixCell>;

// Build one cell's scenario from the shared base: the base supplies initial
// state, dt, mu and decimation; spacecraft, controller (with its default
// gains for that spacecraft) and duration are the cell's own. Runs last
// 10 s, except two-stage cells which need 20 s to settle.
inline ScenarioConfig matrix_scenario(const ScenarioConfig& base, const std::string& cubesat,
                                      ControllerKind kind, const ActuationMask& actuation) {
    ScenarioConfig config = base;
    config.spacecraft = preset(cubesat);
    config.spacecraft.actuation = actuation;
    GainMatrix gains = default_gains(kind, config.spacecraft.inertia);
    switch (kind) {
    case ControllerKind::proportional:
        config.controller = Proportional{gains};
        break;
    case ControllerKind::feedback_linearized:
        config.controller = FeedbackLinearized{gains};
        break;
    case ControllerKind::two_stage:
        config.controller = TwoStage{gains, {}};
        break;
    }
    config.duration = kind == ControllerKind::two_stage ? 20.0 : 10.0;
    return config;
}

// Run the full matrix: the fully actuated block (proportional and FL per
// spacecraft), then the underactuated block (proportional, FL and two-stage
// per spacecraft) — 20 cells. Two-stage only appears underactuated; it is a
// workaround for the missing yaw axis, not a general-purpose law. Cells are
// independent and the result is deterministic.
inline VerdictMatrix run_matrix(const ScenarioConfig& base = {}) {
    VerdictMatrix cells;
    auto run_cell = [&cells, &base](const char* cubesat, ControllerKind kind,
                                    const ActuationMask& actuation) {
        SimResult result = propagate(matrix_scenario(base, cubesat, kind, actuation));
        cells.push_back({cubesat, kind, actuation, result.verdict});
    };
    for (const char* cubesat : preset_names) {
        run_cell(cubesat, ControllerKind::proportional, fully_actuated);
        run_cell(cubesat, ControllerKind::feedback_linearized, fully_actuated);
    }
    for (const char* cubesat : preset_names) {
        run_cell(cubesat, ControllerKind::proportional, underactuated);
        run_cell(cubesat, ControllerKind::feedback_linearized, underactuated);
        run_cell(cubesat, ControllerKind::two_stage, underactuated);
    }
    return cells;
}

// cubesat,controller,actuation,success,final_max_rate,time_to_converge,first_stage_switch
// Optional columns are left empty when absent; numbers carry 17 significant
// digits.
inline void write_matrix_csv(const VerdictMatrix& cells, std::ostream& sink) {
    sink << "cubesat,controller,actuation,success,final_max_rate,time_to_converge,"
            "first_stage_switch\n";
    for (const MatrixCell& cell : cells) {
        sink << cell.cubesat << ',' << controller_token(cell.controller) << ','
             << (cell.actuation == fully_actuated ? "full" : "under") << ','
             << (cell.verdict.success ? "true" : "false") << ','
             << format_g17(cell.verdict.final_max_rate) << ',';
        if (cell.verdict.time_to_converge)
            sink << format_g17(*cell.verdict.time_to_converge);
        sink << ',';
        if (!cell.verdict.stage_switch_times.empty())
            sink << format_g17(cell.verdict.stage_switch_times.front());
        sink << '\n';
    }
    if (!sink)
        throw IoError("matrix CSV write failed");
}

} // namespace detumble
