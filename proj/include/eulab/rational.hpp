#ifndef EULAB_RATIONAL_HPP
#define EULAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdio>
#include <string>

#include "eulab/errors.hpp"

namespace eulab {

// All norm values, coefficients and polytope weights are exact rationals.
// cpp_rational keeps itself in lowest terms with a positive denominator.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline int rat_sign(const Rat& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// Doubles are dyadic rationals; the conversion is exact.
inline Rat rat_from_double(double x) { return Rat(x); }

// Canonical wire format: "p" for integers, "p/q" otherwise, q > 0.
inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += "/";
        s += denominator(r).str();
    }
    return s;
}

// Strict parser for the wire format: optional sign, digits, optional "/digits"
// with a nonzero denominator. Anything else (including "1/0") is a parse_error.
inline Rat rat_from_string(const std::string& text) {
    const auto fail = [&]() -> Rat {
        throw parse_error("malformed rational '" + text + "' (expected \"p\" or \"p/q\", q != 0)");
    };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::size_t numBegin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == numBegin) return fail();
    Int num(text.substr(numBegin, i - numBegin));
    if (negative) num = -num;
    Int den = 1;
    if (i < text.size()) {
        if (text[i] != '/') return fail();
        ++i;
        std::size_t denBegin = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == denBegin || i != text.size()) return fail();
        den = Int(text.substr(denBegin));
        if (den == 0) return fail();
    }
    return Rat(num, den);
}

// Decimal rendering used next to exact values in CSV/JSON output. Fixed "%.12g"
// so identical inputs produce identical bytes.
inline std::string rat_to_decimal(const Rat& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", rat_to_double(r));
    return std::string(buf);
}

inline std::string double_to_decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
}

// 2^k as an exact rational, k may be negative.
inline Rat rat_pow2(int k) {
    Int p = Int(1) << static_cast<unsigned>(k < 0 ? -k : k);
    return k < 0 ? Rat(Int(1), p) : Rat(p, Int(1));
}

} // namespace eulab

#endif
