#pragma once

#include <optional>
#include <vector>

#include "hartogs/polynomial.hpp"
#include "hartogs/rational.hpp"

namespace hartogs {

namespace detail {

inline int sign(const Rational& q) {
    if (q > 0) return 1;
    if (q < 0) return -1;
    return 0;
}

/// Descartes bound on the number of roots of p in the open interval (a,b):
/// sign variations of (1+X)^deg * p((a+bX)/(1+X)).  0 means no root, 1 means
/// exactly one.
inline int interval_variations(const ExactPoly& p, const Rational& a, const Rational& b) {
    // q(X) = p(a + (b-a)X) maps (0,1) onto (a,b); then the Moebius step
    // r(X) = (1+X)^deg q(1/(1+X)) = reverse(q)(X+1).
    const ExactPoly q = p.compose_linear(b - a, a);
    std::vector<Rational> rev(q.coeffs().rbegin(), q.coeffs().rend());
    const ExactPoly r = ExactPoly(std::move(rev)).compose_linear(Rational(1), Rational(1));
    int variations = 0;
    int last = 0;
    for (const auto& c : r.coeffs()) {
        const int s = sign(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++variations;
        last = s;
    }
    return variations;
}

/// Bisection on an interval with p(lo), p(hi) nonzero of opposite signs and
/// exactly one root inside.  Stops once the interval is narrower than tol or
/// an exact rational root is hit.
inline Rational bisect_single_root(const ExactPoly& p, Rational lo, Rational hi,
                                   const Rational& tol) {
    const int slo = sign(p.evaluate(lo));
    while (hi - lo > tol) {
        const Rational mid = (lo + hi) / 2;
        const int sm = sign(p.evaluate(mid));
        if (sm == 0) return mid;
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

/// Smallest root of a square-free p inside (lo,hi), assuming p(lo) != 0 and
/// p(hi) != 0; subdivision points with p(mid) == 0 are exact roots.
inline std::optional<Rational> smallest_root_in(const ExactPoly& p, const Rational& lo,
                                                const Rational& hi, const Rational& tol) {
    const int v = interval_variations(p, lo, hi);
    if (v == 0) return std::nullopt;
    if (v == 1) return bisect_single_root(p, lo, hi, tol);
    const Rational mid = (lo + hi) / 2;
    if (sign(p.evaluate(mid)) == 0) {
        if (auto left = smallest_root_in(p, lo, mid, tol)) return left;
        return mid;
    }
    if (auto left = smallest_root_in(p, lo, mid, tol)) return left;
    return smallest_root_in(p, mid, hi, tol);
}

} // namespace detail

/// Smallest real root of p in (0, inf) to within tol, or nullopt if p has no
/// positive real root.  Isolation uses Descartes sign-variation counts on
/// exact transformed polynomials; refinement is exact bisection.
inline std::optional<double> smallest_positive_root(const ExactPoly& p, double tol = 1e-12) {
    if (p.is_zero()) throw InvalidArgument("root search on zero polynomial");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");

    // Strip roots at the origin; they are not positive.
    std::vector<Rational> c = p.coeffs();
    std::size_t shift = 0;
    while (shift < c.size() && c[shift] == 0) ++shift;
    ExactPoly q(std::vector<Rational>(c.begin() + static_cast<long>(shift), c.end()));
    if (q.degree() < 1) return std::nullopt;

    // Square-free part: root locations survive, multiplicities collapse.
    const ExactPoly g = ExactPoly::gcd(q, q.derivative());
    if (g.degree() > 0) q = q.divmod(g).first;

    // Cauchy bound: all roots lie strictly inside |x| < B, so p(B) != 0.
    Rational maxabs(0);
    for (const auto& ci : q.coeffs()) {
        const Rational a = ci < 0 ? -ci : ci;
        if (a > maxabs) maxabs = a;
    }
    const Rational lead = q.leading() < 0 ? -q.leading() : q.leading();
    const Rational bound = 1 + maxabs / lead;

    Rational tol_r(1);
    while (to_double(tol_r) > tol) tol_r /= 2;

    const auto root = detail::smallest_root_in(q, Rational(0), bound, tol_r);
    if (!root) return std::nullopt;
    return to_double(*root);
}

} // namespace hartogs
