#pragma once

#include <string>

namespace opinionfit {

// Shortest decimal form that parses back to the same double, padded with
// trailing zeros when shorter than six significant digits.
std::string format_full(double x);

// Six significant digits, for console output.
std::string format_sig6(double x);

}  // namespace opinionfit
