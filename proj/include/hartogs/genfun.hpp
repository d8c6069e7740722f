#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hartogs/cartan.hpp"
#include "hartogs/combinatorics.hpp"
#include "hartogs/polynomial.hpp"
#include "hartogs/rational.hpp"

namespace hartogs {

/// chi(s), P(t) = t*chi(t) and their coefficient data.
struct ChiData {
    ExactPoly chi;                  // in s
    ExactPoly p;                    // P(t) = t * chi(t)
    std::vector<Rational> a_coeffs; // a_0..a_D of P (a_0 = 0)
    int big_d = 0;                  // D = deg P = deg chi + 1
};

/// chi(s) = prod_{i=1}^{r} prod_{l=0}^{b+(r-i)a} [s + 1 + (i-1)a/2 + l].
inline ChiData build_chi(const CartanParams& params) {
    ExactPoly chi = ExactPoly::constant(1);
    for (int i = 1; i <= params.r; ++i) {
        const Rational base = 1 + Rational(i - 1) * params.a / 2;
        for (int l = 0; l <= params.b + (params.r - i) * params.a; ++l)
            chi = chi * ExactPoly({base + l, Rational(1)});
    }
    ChiData data;
    data.p = ExactPoly::monomial(Rational(1), 1) * chi;
    data.chi = std::move(chi);
    data.big_d = data.p.degree();
    data.a_coeffs.resize(static_cast<std::size_t>(data.big_d) + 1);
    for (int m = 0; m <= data.big_d; ++m)
        data.a_coeffs[static_cast<std::size_t>(m)] = data.p.coeff(static_cast<std::size_t>(m));
    return data;
}

/// First `order` coefficients of F: f_m = mu(m+1) chi(mu(m+1)), exactly.
inline std::vector<Rational> f_series(const CartanParams& params, const Rational& mu,
                                      int order) {
    if (!(mu > 0)) throw InvalidArgument("mu must be positive");
    if (order < 1) throw InvalidArgument("series order must be >= 1");
    const ChiData chi = build_chi(params);
    std::vector<Rational> f(static_cast<std::size_t>(order));
    for (int m = 0; m < order; ++m)
        f[static_cast<std::size_t>(m)] = chi.p.evaluate(mu * (m + 1));
    return f;
}

/// One term coeff * X^{q-1} / (1-X)^{q+1} of the Stirling form of F.
struct StirlingTerm {
    Rational coefficient;
    int q = 0;
};

/// F in its three equivalent exact representations: the rational form
/// Q(X)/(1-X)^{D+1}, the falling-factorial data b_k, the Stirling form, and
/// the partial-fraction coefficients c_i of F = sum_i c_i (1-X)^{-i}.
struct FRepresentation {
    CartanParams params;
    Rational mu;
    ExactPoly q_poly;
    int big_d = 0;
    std::vector<Rational> b_coeffs;           // b_0..b_D
    std::vector<StirlingTerm> stirling_terms; // q = 1..D
    std::vector<Rational> c_coeffs;           // c_1..c_{D+1}, index i-1

    ExactRationalFn rational_fn() const {
        return ExactRationalFn(q_poly,
                               ExactPoly({Rational(1), Rational(-1)}).pow(
                                   static_cast<unsigned>(big_d) + 1));
    }
};

inline FRepresentation f_rational(const CartanParams& params, const Rational& mu) {
    if (!(mu > 0)) throw InvalidArgument("mu must be positive");
    const ChiData chi = build_chi(params);
    const int big_d = chi.big_d;

    // p(m) = P(mu(m+1)) as a polynomial in m.
    const ExactPoly pm = chi.p.compose_linear(mu, mu);
    if (pm.degree() != big_d)
        throw InternalConsistencyError("degree collapse: deg p(m) < D");

    FRepresentation rep;
    rep.params = params;
    rep.mu = mu;
    rep.big_d = big_d;
    rep.b_coeffs = monomial_to_falling(pm);

    // Q(X) = sum_k b_k k! X^k (1-X)^{D-k}.
    const ExactPoly one_minus_x({Rational(1), Rational(-1)});
    ExactPoly q;
    for (int k = 0; k <= big_d; ++k) {
        const auto ku = static_cast<unsigned>(k);
        q = q + (rep.b_coeffs[ku] * Rational(factorial(ku))) *
                    (ExactPoly::monomial(Rational(1), ku) *
                     one_minus_x.pow(static_cast<unsigned>(big_d - k)));
    }
    rep.q_poly = std::move(q);

    // Stirling form: F = sum_q [sum_m a_m mu^m S(m,q) q!] X^{q-1}/(1-X)^{q+1}.
    const auto stirling = stirling2_table(static_cast<unsigned>(big_d));
    Rational mu_pow = 1;
    std::vector<Rational> per_q(static_cast<std::size_t>(big_d) + 1, Rational(0));
    for (int m = 0; m <= big_d; ++m) {
        for (int qq = 1; qq <= m; ++qq)
            per_q[static_cast<std::size_t>(qq)] +=
                chi.a_coeffs[static_cast<std::size_t>(m)] * mu_pow *
                Rational(stirling[static_cast<std::size_t>(m)][static_cast<std::size_t>(qq)]) *
                Rational(factorial(static_cast<unsigned>(qq)));
        mu_pow *= mu;
    }
    for (int qq = 1; qq <= big_d; ++qq)
        rep.stirling_terms.push_back({per_q[static_cast<std::size_t>(qq)], qq});

    // Partial fractions by Taylor expansion of Q at X=1:
    // Q(X) = sum_j t_j (X-1)^j  =>  c_i = (-1)^{D+1-i} t_{D+1-i}.
    const ExactPoly q_at_1 = rep.q_poly.compose_linear(Rational(1), Rational(1));
    rep.c_coeffs.assign(static_cast<std::size_t>(big_d) + 1, Rational(0));
    for (int i = 1; i <= big_d + 1; ++i) {
        const int j = big_d + 1 - i;
        const Rational t = q_at_1.coeff(static_cast<std::size_t>(j));
        rep.c_coeffs[static_cast<std::size_t>(i - 1)] = (j % 2 == 0) ? t : -t;
    }

    // The two nonvanishing facts Q(1) = b_D D! != 0 and Q(0) = b_0 != 0.
    const Rational q1 = rep.q_poly.evaluate(Rational(1));
    const Rational expected_q1 =
        rep.b_coeffs[static_cast<std::size_t>(big_d)] *
        Rational(factorial(static_cast<unsigned>(big_d)));
    if (q1 != expected_q1 || q1 == 0)
        throw InternalConsistencyError("Q(1) = b_D D! violated");
    if (rep.q_poly.evaluate(Rational(0)) != rep.b_coeffs[0] || rep.b_coeffs[0] == 0)
        throw InternalConsistencyError("Q(0) = b_0 violated");
    if (rep.q_poly.degree() > big_d)
        throw InternalConsistencyError("deg Q exceeds D");
    return rep;
}

/// F(x) = Q(x)/(1-x)^{D+1}, exact.  x = 1 is the pole.
inline Rational f_eval(const FRepresentation& rep, const Rational& x) {
    if (x == 1) throw DomainViolation("F has a pole at x = 1");
    const Rational den_base = 1 - x;
    Rational den = 1;
    for (int i = 0; i <= rep.big_d; ++i) den *= den_base;
    return rep.q_poly.evaluate(x) / den;
}

/// Series of the rational form: Q(X) * sum_m binom(m+D, D) X^m.
inline std::vector<Rational> series_from_rational_form(const FRepresentation& rep, int order) {
    std::vector<Rational> out(static_cast<std::size_t>(order), Rational(0));
    for (int m = 0; m < order; ++m) {
        Rational acc = 0;
        for (int k = 0; k <= std::min(m, rep.q_poly.degree()); ++k)
            acc += rep.q_poly.coeff(static_cast<std::size_t>(k)) *
                   Rational(binomial(static_cast<unsigned>(m - k + rep.big_d),
                                     static_cast<unsigned>(rep.big_d)));
        out[static_cast<std::size_t>(m)] = acc;
    }
    return out;
}

/// Series of the Stirling form: coefficient of X^m in
/// sum_q c_q X^{q-1}/(1-X)^{q+1} is sum_q c_q binom(m+1, q).
inline std::vector<Rational> series_from_stirling_form(const FRepresentation& rep, int order) {
    std::vector<Rational> out(static_cast<std::size_t>(order), Rational(0));
    for (int m = 0; m < order; ++m) {
        Rational acc = 0;
        for (const auto& term : rep.stirling_terms)
            acc += term.coefficient * Rational(binomial(static_cast<unsigned>(m + 1),
                                                        static_cast<unsigned>(term.q)));
        out[static_cast<std::size_t>(m)] = acc;
    }
    return out;
}

struct CrossValidation {
    bool all_equal = true;
    int first_mismatch = -1;
    std::string detail;
};

/// Expands all three representations of F to the given order in exact
/// arithmetic and compares coefficient-wise.
inline CrossValidation cross_validate(const FRepresentation& rep, int order) {
    if (order < rep.big_d + 2)
        throw InvalidArgument("cross_validate needs order >= D+2");
    const auto direct = f_series(rep.params, rep.mu, order);
    const auto rational = series_from_rational_form(rep, order);
    const auto stirling = series_from_stirling_form(rep, order);
    CrossValidation cv;
    for (int m = 0; m < order; ++m) {
        const auto mu_ = static_cast<std::size_t>(m);
        if (direct[mu_] != rational[mu_] || direct[mu_] != stirling[mu_]) {
            cv.all_equal = false;
            cv.first_mismatch = m;
            cv.detail = "m=" + std::to_string(m) + ": series=" + to_string(direct[mu_]) +
                        " rational=" + to_string(rational[mu_]) +
                        " stirling=" + to_string(stirling[mu_]);
            break;
        }
    }
    return cv;
}

} // namespace hartogs
