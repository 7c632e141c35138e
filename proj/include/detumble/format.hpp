#pragma once

// Scalar formatting shared by the text emitters.

#include <cstdio>
#include <string>

namespace detumble {

// 17 significant digits: enough that strtod reproduces every finite double
// bit-exactly, which the telemetry and scenario round trips rely on.
inline std::string format_g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

} // namespace detumble
