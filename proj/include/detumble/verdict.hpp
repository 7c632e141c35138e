#pragma once

// Detumble verdict evaluation over a telemetry trace.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "detumble/telemetry.hpp"

namespace detumble {

inline constexpr double default_success_threshold = 0.01; // [rad/s]
inline constexpr double default_window_fraction = 0.1;

inline double max_rate(const TelemetryRecord& rec) {
    return std::max({std::abs(rec.omega_body.x), std::abs(rec.omega_body.y),
                     std::abs(rec.omega_body.z)});
}

// Success means every record in the trailing window (the last
// window_fraction of records, at least one) keeps all three body rates
// below the threshold; an aborted run never succeeds. time_to_converge is
// the earliest time after which the rate bound holds through the end of the
// run, absent if even the final record violates it. Stage-switch times are
// the timestamps where the recorded two-stage FSM state changes.
inline DetumbleVerdict detumble_verdict(const SimResult& result,
                                        double success_threshold = default_success_threshold,
                                        double window_fraction = default_window_fraction) {
    DetumbleVerdict v;
    const auto& recs = result.records;
    if (recs.empty())
        return v;

    size_t n = recs.size();
    size_t window = (size_t)std::ceil(window_fraction * (double)n);
    window = std::clamp<size_t>(window, 1, n);
    double worst = 0.0;
    for (size_t i = n - window; i < n; ++i)
        worst = std::max(worst, max_rate(recs[i]));
    v.final_max_rate = worst;
    v.success = worst < success_threshold && !result.aborted;

    size_t first_ok = n; // start of the longest all-below-threshold suffix
    for (size_t i = n; i-- > 0;) {
        if (max_rate(recs[i]) < success_threshold)
            first_ok = i;
        else
            break;
    }
    if (first_ok < n)
        v.time_to_converge = recs[first_ok].t;

    for (size_t i = 1; i < n; ++i) {
        if (recs[i].stage != recs[i - 1].stage && recs[i].stage != 0 &&
            recs[i - 1].stage != 0)
            v.stage_switch_times.push_back(recs[i].t);
    }
    return v;
}

} // namespace detumble
