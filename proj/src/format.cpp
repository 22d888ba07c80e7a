#include "hbell/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace hbell {

namespace {

std::string special(double value) {
    if (std::isnan(value)) return "nan";
    return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_number(double value, int digits) {
    if (!std::isfinite(value)) return special(value);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

std::string format_shortest(double value) {
    if (!std::isfinite(value)) return special(value);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace hbell
