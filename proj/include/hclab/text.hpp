#pragma once

// Number literals shared by descriptors and configs.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "hclab/error.hpp"

namespace hclab {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

namespace detail {

inline double parse_decimal(std::string_view s, std::string_view whole) {
    s = trim(s);
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
        fail(errc::config_parse, "not a number: '" + std::string(whole) + "'");
    return v;
}

} // namespace detail

/// Decimal or rational literal: "0.5", "-3/2", "1e-3". A rational p/q is one correctly rounded division.
inline double parse_real(std::string_view text) {
    const auto s = trim(text);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return detail::parse_decimal(s, text);
    const double num = detail::parse_decimal(s.substr(0, slash), text);
    const double den = detail::parse_decimal(s.substr(slash + 1), text);
    if (den == 0.0) fail(errc::config_parse, "zero denominator in '" + std::string(text) + "'");
    return num / den;
}

/// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) fail(errc::io, "cannot format number");
    return std::string(buf, end);
}

} // namespace hclab
