#pragma once

// Telemetry records, the detumble verdict container, and bit-exact CSV IO.

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "detumble/errors.hpp"
#include "detumble/linalg.hpp"
#include "detumble/quaternion.hpp"

namespace detumble {

// One telemetry sample: the state at time t, the moment applied over the
// following interval, and the controller stage that produced it
// (0 = controller has no stages, 1/2 = two-stage FSM state).
struct TelemetryRecord {
    double t = 0.0;        // [s]
    Vec3 position_eci;     // [m]
    Quaternion quaternion; // body -> ECI
    Vec3 velocity_eci;     // [m/s]
    Vec3 omega_body;       // [rad/s] (p, q, r)
    Vec3 moment_applied;   // [N*m]  (L, M, N)
    int stage = 0;

    bool operator==(const TelemetryRecord&) const = default;
};

struct DetumbleVerdict {
    bool success = false;
    double final_max_rate = 0.0;            // [rad/s] worst rate in the trailing window
    std::optional<double> time_to_converge; // [s] earliest time the rate bound holds from
    std::vector<double> stage_switch_times; // [s] two-stage transitions, in order

    bool operator==(const DetumbleVerdict&) const = default;
};

// Complete simulation output. `aborted` marks a run cut short by a
// non-finite state; whatever telemetry accumulated up to that point is
// retained, and an aborted run's verdict is never a success.
struct SimResult {
    std::vector<TelemetryRecord> records;
    bool aborted = false;
    std::string abort_reason;
    DetumbleVerdict verdict;
};

inline constexpr const char* telemetry_csv_header =
    "t,px,py,pz,q0,q1,q2,q3,vx,vy,vz,p,q,r,L,M,N,stage";

// One row per record, every scalar at 17 significant digits so a re-parse
// reproduces the doubles bit-exactly.
inline void write_csv(const SimResult& result, std::ostream& sink) {
    if (result.records.empty())
        throw IoError("refusing to write telemetry CSV with no records");
    sink << telemetry_csv_header << '\n';
    char row[640];
    for (const TelemetryRecord& rec : result.records) {
        std::snprintf(row, sizeof row,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      rec.t, rec.position_eci.x, rec.position_eci.y, rec.position_eci.z,
                      rec.quaternion.q0, rec.quaternion.q1, rec.quaternion.q2, rec.quaternion.q3,
                      rec.velocity_eci.x, rec.velocity_eci.y, rec.velocity_eci.z,
                      rec.omega_body.x, rec.omega_body.y, rec.omega_body.z,
                      rec.moment_applied.x, rec.moment_applied.y, rec.moment_applied.z,
                      rec.stage);
        sink << row;
    }
    if (!sink)
        throw IoError("telemetry CSV write failed");
}

namespace csv_detail {

inline double parse_double(const std::string& field, int line_number) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line_number, "expected a number, got '" + field + "'");
    return value;
}

inline int parse_stage(const std::string& field, int line_number) {
    int value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line_number, "expected an integer stage, got '" + field + "'");
    return value;
}

} // namespace csv_detail

// Strict reader for the exact format write_csv emits. Returns a SimResult
// with only the records populated; run detumble_verdict to re-judge it.
inline SimResult read_csv(std::istream& source) {
    std::string line;
    if (!std::getline(source, line))
        throw ParseError(1, "empty telemetry CSV");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != telemetry_csv_header)
        throw ParseError(1, "unexpected telemetry CSV header");

    SimResult out;
    int line_number = 1;
    while (std::getline(source, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 18)
            throw ParseError(line_number, "expected 18 fields, got " +
                                              std::to_string(fields.size()));

        auto num = [&](int i) { return csv_detail::parse_double(fields[(size_t)i], line_number); };
        TelemetryRecord rec;
        rec.t = num(0);
        rec.position_eci = {num(1), num(2), num(3)};
        rec.quaternion = {num(4), num(5), num(6), num(7)};
        rec.velocity_eci = {num(8), num(9), num(10)};
        rec.omega_body = {num(11), num(12), num(13)};
        rec.moment_applied = {num(14), num(15), num(16)};
        rec.stage = csv_detail::parse_stage(fields[17], line_number);
        out.records.push_back(rec);
    }
    return out;
}

} // namespace detumble
