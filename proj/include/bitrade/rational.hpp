#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bitrade {

/// Exact rational scalar used throughout the library. Floating point is
/// admitted only in sampling helpers and the float LP cross-check.
/// Expression templates are off so arithmetic yields plain values.
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using Int = boost::multiprecision::cpp_int;

/// Canonical text form: "n" for integers, "n/d" otherwise (d > 0).
inline std::string format_rational(const Rat& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

/// Parses "n", "n/d" or "-n/d". Throws std::invalid_argument on anything else.
inline Rat parse_rational(std::string_view text) {
    const auto bad = [&] {
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    const auto is_int = [&](std::string_view part) {
        if (part.empty()) return false;
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    const auto to_int = [](std::string_view part) {  // cpp_int rejects a leading '+'
        return Int{std::string(part[0] == '+' ? part.substr(1) : part)};
    };
    if (slash == std::string_view::npos) {
        if (!is_int(text)) bad();
        return Rat(to_int(text));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) bad();
    const Int d = to_int(den);
    if (d == 0) bad();
    return Rat(to_int(num), d);
}

/// pow for rationals with integer exponent (negative exponents allowed for
/// nonzero base).
inline Rat rat_pow(const Rat& base, long exp) {
    if (exp == 0) return Rat(1);
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rat_pow: zero base, negative exponent");
        return Rat(1) / rat_pow(base, -exp);
    }
    Rat acc(1), b = base;
    long e = exp;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline std::vector<std::string> format_rationals(const std::vector<Rat>& vs) {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(format_rational(v));
    return out;
}

}  // namespace bitrade
