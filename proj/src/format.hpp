#pragma once

#include <cstdio>
#include <string>

namespace dynkin {

// Round-trip (17 significant digit) formatting for files.
inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Six significant digits for human-facing output.
inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace dynkin
