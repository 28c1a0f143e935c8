#include "opinionfit/format.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>

namespace opinionfit {

static int significant_digits(const char* s) {
    int n = 0;
    bool seen_nonzero = false;
    for (const char* p = s; *p && *p != 'e' && *p != 'E'; ++p) {
        if (*p < '0' || *p > '9') continue;
        if (*p != '0') seen_nonzero = true;
        if (seen_nonzero) ++n;
    }
    return n;
}

std::string format_full(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    *res.ptr = '\0';
    if (significant_digits(buf) >= 6 || std::strchr(buf, 'e') != nullptr ||
        std::strchr(buf, 'n') != nullptr) {
        return buf;
    }
    // Pad short literals like "0.65" out to six significant digits.
    for (int prec = 6; prec <= 40; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*f", prec, x);
        if (significant_digits(buf) >= 6) break;
    }
    return buf;
}

std::string format_sig6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

}  // namespace opinionfit
