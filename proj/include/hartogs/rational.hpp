#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "hartogs/errors.hpp"

namespace hartogs {

// Exact arithmetic scalars.  cpp_rational keeps gcd(|num|,den)=1 and den>0
// after every operation, which is exactly the invariant we need.
using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1; // exact at every step
    }
    return r;
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// Parses "p", "-p" or "p/q" into a rational.  Anything else throws.
inline Rational parse_rational(std::string_view text) {
    const auto bad = [&] {
        throw InvalidArgument("not a rational literal: '" + std::string(text) + "'");
    };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    const auto is_int = [&](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(text)) bad();
            return Rational(Integer(std::string(text)));
        }
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) bad();
        Integer d{std::string(den)};
        if (d == 0) throw InvalidArgument("zero denominator: '" + std::string(text) + "'");
        return Rational(Integer(std::string(num)), d);
    } catch (const std::exception& e) {
        throw InvalidArgument(std::string("not a rational literal: ") + e.what());
    }
}

/// "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline long double to_long_double(const Rational& q) {
    // Convert num/den separately; each rounds to 1 ulp, the quotient to ~2.
    return numerator(q).convert_to<long double>() /
           denominator(q).convert_to<long double>();
}

} // namespace hartogs
