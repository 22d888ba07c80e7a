#pragma once

// Locale-independent number formatting for every file the tools emit.

#include <string>

namespace hbell {

/// `digits` significant digits, '.' separator, no locale dependence.
std::string format_number(double value, int digits);

/// Shortest representation that round-trips.
std::string format_shortest(double value);

/// CSV cells use 12 significant digits.
inline std::string csv_number(double value) { return format_number(value, 12); }

}  // namespace hbell
