#pragma once

#include <cstdio>
#include <string>

namespace omcoh {

/// Frozen CSV number format: shortest decimal at 12 significant digits.
inline std::string format_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace omcoh
