#pragma once

#include <vector>

#include "hartogs/polynomial.hpp"
#include "hartogs/rational.hpp"

namespace hartogs {

/// Triangle of Stirling numbers of the second kind, rows 0..max_m.
/// S(m,q) = q*S(m-1,q) + S(m-1,q-1), S(0,0)=1, S(m,0)=0 for m>=1.
inline std::vector<std::vector<Integer>> stirling2_table(unsigned max_m) {
    std::vector<std::vector<Integer>> s(max_m + 1);
    s[0] = {Integer(1)};
    for (unsigned m = 1; m <= max_m; ++m) {
        s[m].assign(m + 1, Integer(0));
        for (unsigned q = 1; q <= m; ++q) {
            Integer t = s[m - 1][q - 1];
            if (q <= m - 1) t += Integer(q) * s[m - 1][q];
            s[m][q] = t;
        }
    }
    return s;
}

inline Integer stirling2(unsigned m, unsigned q) {
    if (q > m) return 0;
    const auto table = stirling2_table(m);
    return table[m][q];
}

/// Falling factorial x(x-1)...(x-k+1) as an exact polynomial in x.
inline ExactPoly falling_factorial_poly(unsigned k) {
    ExactPoly p = ExactPoly::constant(1);
    for (unsigned i = 0; i < k; ++i)
        p = p * ExactPoly({Rational(-int(i)), Rational(1)});
    return p;
}

/// Coefficients b_0..b_D with p(m) = sum_k b_k * m!/(m-k)! as a polynomial
/// identity.  Uses m^j = sum_q S(j,q) (m)_q, hence b_k = sum_j a_j S(j,k).
inline std::vector<Rational> monomial_to_falling(const ExactPoly& p) {
    if (p.is_zero()) throw InvalidArgument("empty decomposition: zero polynomial");
    const unsigned d = static_cast<unsigned>(p.degree());
    const auto s = stirling2_table(d);
    std::vector<Rational> b(d + 1, Rational(0));
    for (unsigned k = 0; k <= d; ++k)
        for (unsigned j = k; j <= d; ++j)
            b[k] += p.coeff(j) * Rational(s[j][k]);
    return b;
}

/// Inverse of monomial_to_falling: expands sum_k b_k (m)_k back to the
/// monomial basis.
inline ExactPoly falling_to_monomial(const std::vector<Rational>& b) {
    ExactPoly p;
    for (std::size_t k = 0; k < b.size(); ++k)
        p = p + b[k] * falling_factorial_poly(static_cast<unsigned>(k));
    return p;
}

} // namespace hartogs
