#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace rmc {

// Nine significant digits, used for every serialized floating-point value.
inline std::string fmt9(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Round-trips a value through its nine-digit decimal form.
inline double round9(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(fmt9(v));
}

}  // namespace rmc
