#pragma once

#include <cstdio>
#include <string>

namespace ergolab {

// Locale-independent decimal with 12 significant digits (%g never consults
// the locale for the decimal point in the C locale facets we rely on; snprintf
// with "C" semantics is guaranteed since we never call setlocale).
inline std::string fmt12(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Exact round-trip form for config echo.
inline std::string fmt17(double x) {
    if (x == 0.0) x = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_int(long long x) { return std::to_string(x); }

} // namespace ergolab
