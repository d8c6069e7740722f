#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hartogs/genfun.hpp"
#include "hartogs/roots.hpp"

namespace hartogs {

namespace detail {

/// Clears denominators: returns (integer polynomial, multiplier m) with
/// m * p having the integer coefficients.
inline std::pair<Polynomial<Integer>, Integer> clear_denominators(const ExactPoly& p) {
    Integer m = 1;
    for (const auto& c : p.coeffs()) m = lcm(m, denominator(c));
    std::vector<Integer> v(p.coeffs().size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = numerator(p.coeffs()[i]) * (m / denominator(p.coeffs()[i]));
    return {Polynomial<Integer>(std::move(v)), m};
}

} // namespace detail

/// Checks the exact polynomial identity in s
///   prod_{i,l} [ s mu + 1 + (i-1)a/2 + l ] = c (s+d-2)...(s+1) / ((d-1)! mu),
/// both sides expanded as exact polynomials and compared coefficient-wise.
inline bool condchi_identity(const CartanParams& params, const Rational& mu, int d,
                             const Rational& c) {
    if (d < 1) throw InvalidArgument("d must be >= 1");
    if (!(mu > 0)) throw InvalidArgument("mu must be positive");
    const ChiData chi = build_chi(params);
    const ExactPoly lhs = chi.chi.compose_linear(mu, Rational(0));
    ExactPoly prod = ExactPoly::constant(1);
    for (int j = 1; j <= d - 2; ++j)
        prod = prod * ExactPoly({Rational(j), Rational(1)});
    const Rational scale = c / (Rational(factorial(static_cast<unsigned>(d - 1))) * mu);
    return lhs == scale * prod;
}

struct BallVerdict {
    bool is_ball = false;
    ExactPoly q_poly;
    int big_d = 0;
    std::string detail;
};

/// True iff Q(X) is constant and D+1 = n+2.  A positive verdict is
/// double-checked against the Lemma values ((r,a,b)=(1,0,n-1), mu=1,
/// Q=(n+1)!) and against the independent condchi route; disagreement is an
/// internal error, never silently accepted.
inline BallVerdict is_unit_ball(const CartanParams& params, const Rational& mu) {
    const FRepresentation rep = f_rational(params, mu);
    BallVerdict verdict;
    verdict.q_poly = rep.q_poly;
    verdict.big_d = rep.big_d;
    const bool q_const = rep.q_poly.degree() == 0;
    const bool dim_ok = rep.big_d + 1 == params.n + 2;
    verdict.is_ball = q_const && dim_ok;

    // Independent route: F = c/(1-X)^{n+2} as the exact chi identity, with c
    // pinned by the leading coefficients (chi is monic of degree n).
    Rational c_fit = Rational(factorial(static_cast<unsigned>(params.n) + 1));
    for (int i = 0; i <= params.n; ++i) c_fit *= mu;
    const bool cond = condchi_identity(params, mu, params.n + 2, c_fit);
    if (cond != verdict.is_ball)
        throw InternalConsistencyError(
            "is_unit_ball: Q-constancy and condchi routes disagree");

    if (verdict.is_ball) {
        const Rational expected_q = Rational(factorial(static_cast<unsigned>(params.n) + 1));
        if (params.r != 1 || params.a != 0 || params.b != params.n - 1 || mu != 1 ||
            rep.q_poly.coeff(0) != expected_q)
            throw InternalConsistencyError(
                "is_unit_ball: constant Q outside the (1,0,n-1), mu=1, Q=(n+1)! case");
        verdict.detail = "Q = (n+1)! = " + to_string(expected_q) + ", D+1 = n+2 = " +
                         std::to_string(params.n + 2);
    } else {
        verdict.detail = q_const ? "D+1 != n+2" : "Q non-constant, degree " +
                                                      std::to_string(rep.q_poly.degree());
    }
    return verdict;
}

struct KEWitness {
    ExactPoly u, v, w;
    std::optional<Rational> delta;
    ExactPoly residual; // zero when delta found, else a non-proportionality certificate
};

/// Exact proportionality test U^n V (1-X)^{D+1} = delta Q W with
///   U = mu X(1-X)Q' + mu X(D+1)Q + (gamma+mu)(1-X)Q,
///   V = [(Q' + XQ'')Q - X Q'^2](1-X)^2 + (D+1)Q^2,
///   W = (n+2)^{n+1} Q^{n+2} (1-X)^{n+2}.
/// delta is fitted from the leading coefficients and then verified on all
/// coefficients.  The heavy products run over denominator-cleared integer
/// polynomials with binary powering.
inline KEWitness ke_identity(const CartanParams& params, const Rational& mu) {
    const FRepresentation rep = f_rational(params, mu);
    const ExactPoly& q = rep.q_poly;
    const int big_d = rep.big_d;
    const int n = params.n;
    if (big_d + 1 != n + 2)
        throw InternalConsistencyError("D+1 != n+2 (dimension formula violated)");

    const ExactPoly one_minus_x({Rational(1), Rational(-1)});
    const ExactPoly x_poly = ExactPoly::monomial(Rational(1), 1);
    const ExactPoly qp = q.derivative();
    const ExactPoly qpp = qp.derivative();
    const Rational gm = Rational(params.gamma) + mu;

    KEWitness wit;
    wit.u = mu * (x_poly * one_minus_x * qp) + (mu * Rational(big_d + 1)) * (x_poly * q) +
            gm * (one_minus_x * q);
    wit.v = ((qp + x_poly * qpp) * q - x_poly * (qp * qp)) * (one_minus_x * one_minus_x) +
            Rational(big_d + 1) * (q * q);
    Rational npow = 1; // (n+2)^{n+1}
    for (int i = 0; i <= n; ++i) npow *= Rational(n + 2);

    // All heavy powering runs over denominator-cleared integer polynomials;
    // per-operation rational gcd normalization would dominate otherwise.
    const auto [ui, um] = detail::clear_denominators(wit.u);
    const auto [vi, vm] = detail::clear_denominators(wit.v);
    const auto [qi, qm] = detail::clear_denominators(q);
    const Polynomial<Integer> one_minus_x_i({Integer(1), Integer(-1)});
    const Polynomial<Integer> w_i = qi.pow(static_cast<unsigned>(n) + 2) *
                                    one_minus_x_i.pow(static_cast<unsigned>(n) + 2);
    Rational qm_pow = 1; // qm^{n+2}
    for (int i = 0; i < n + 2; ++i) qm_pow *= Rational(qm);
    wit.w = (npow / qm_pow) * to_rational_poly(w_i);

    // lhs = U^n V (1-X)^{D+1} = lhs_i/(um^n vm); rhs = Q W = npow*rhs_i/qm^{n+3}.
    const Polynomial<Integer> lhs_i =
        ui.pow(static_cast<unsigned>(n)) * vi *
        one_minus_x_i.pow(static_cast<unsigned>(big_d) + 1);
    const Polynomial<Integer> rhs_i = qi * w_i;
    Rational lhs_mult = Rational(1) / vm;
    for (int i = 0; i < n; ++i) lhs_mult /= Rational(um);
    const Rational rhs_mult = npow / (qm_pow * Rational(qm));

    const Rational delta_fit = (Rational(lhs_i.leading()) * lhs_mult) /
                               (Rational(rhs_i.leading()) * rhs_mult);
    bool proportional = lhs_i.degree() == rhs_i.degree();
    if (proportional) {
        // lhs_i * lhs_mult == delta_fit * rhs_i * rhs_mult, cross-multiplied
        // to integers.
        const Rational ratio = delta_fit * rhs_mult / lhs_mult; // lhs_i == ratio*rhs_i
        const Integer rn = numerator(ratio), rd = denominator(ratio);
        for (int k = 0; k <= lhs_i.degree() && proportional; ++k)
            proportional = rd * lhs_i.coeff(static_cast<std::size_t>(k)) ==
                           rn * rhs_i.coeff(static_cast<std::size_t>(k));
    }
    if (proportional) {
        wit.delta = delta_fit;
        wit.residual = ExactPoly{};
    } else {
        ExactPoly lhs_r = lhs_mult * to_rational_poly(lhs_i);
        ExactPoly rhs_r = rhs_mult * to_rational_poly(rhs_i);
        wit.residual = lhs_r - delta_fit * rhs_r;
        if (wit.residual.is_zero())
            throw InternalConsistencyError("ke_identity: zero residual without delta");
    }
    return wit;
}

struct ProjInducedResult {
    bool induced = false;
    std::optional<ExactPoly> quotient;
    std::string obstruction;
};

/// Decides whether (1+X)^{(D+1)alpha} / Q^alpha(-X) is a polynomial.
inline ProjInducedResult proj_induced_dual(const CartanParams& params, const Rational& mu,
                                           const Rational& alpha) {
    if (!(alpha > 0)) throw InvalidArgument("alpha must be positive");
    const FRepresentation rep = f_rational(params, mu);
    const Rational k0_rat = Rational(rep.big_d + 1) * alpha;
    ProjInducedResult res;
    if (!is_integer(k0_rat)) {
        res.obstruction = "(D+1)alpha = " + to_string(k0_rat) + " is not a positive integer";
        return res;
    }
    const unsigned k0 = numerator(k0_rat).convert_to<unsigned>();
    const ExactPoly q_neg = rep.q_poly.reflect();
    const ExactPoly one_plus_x({Rational(1), Rational(1)});
    if (!is_integer(alpha)) {
        if (q_neg.degree() == 0) {
            res.induced = true;
            res.quotient = one_plus_x.pow(k0);
            res.obstruction =
                "quotient given up to the scalar Q(0)^(-alpha), Q(0) = " +
                to_string(q_neg.coeff(0));
            return res;
        }
        res.obstruction = "non-integer alpha with non-constant Q(-X)";
        return res;
    }
    const unsigned alpha_int = numerator(alpha).convert_to<unsigned>();
    const auto [quot, rem] = one_plus_x.pow(k0).divmod(q_neg.pow(alpha_int));
    if (rem.is_zero()) {
        res.induced = true;
        res.quotient = quot;
    } else {
        res.obstruction = "Q^alpha(-X) does not divide (1+X)^{(D+1)alpha}: remainder degree " +
                          std::to_string(rem.degree());
    }
    return res;
}

/// Smallest positive root of Q(-Y); nullopt means the dual kernel stays
/// positive for all Y > 0 ("infinity").
inline std::optional<double> dual_positivity_bound(const CartanParams& params,
                                                   const Rational& mu,
                                                   double tol = 1e-12) {
    const FRepresentation rep = f_rational(params, mu);
    return smallest_positive_root(rep.q_poly.reflect(), tol);
}

/// alpha such that F has the single-term partial-fraction form
/// c_alpha (1-X)^{-alpha}; nullopt otherwise.  A single-term F must satisfy
/// alpha = (gamma+mu)/mu.
inline std::optional<Rational> kob_proportionality(const CartanParams& params,
                                                   const Rational& mu) {
    const FRepresentation rep = f_rational(params, mu);
    int nonzero_index = 0;
    int nonzero_count = 0;
    for (std::size_t i = 0; i < rep.c_coeffs.size(); ++i) {
        if (rep.c_coeffs[i] != 0) {
            ++nonzero_count;
            nonzero_index = static_cast<int>(i) + 1;
        }
    }
    if (nonzero_count != 1) return std::nullopt;
    const Rational alpha(nonzero_index);
    if (alpha != (Rational(params.gamma) + mu) / mu)
        throw InternalConsistencyError(
            "kob_proportionality: single-term F fails alpha = (gamma+mu)/mu");
    return alpha;
}

struct ClassificationReport {
    CartanParams params;
    Rational mu;
    bool is_ball = false;
    bool q_constant = false;
    ExactPoly q_poly;
    bool ke_identity_holds = false;
    std::optional<Rational> ke_delta;
    std::vector<std::pair<Rational, bool>> proj_induced;
    std::optional<double> dual_bound; // nullopt = infinity
    std::optional<Rational> kob_alpha;
};

inline std::vector<Rational> default_alphas() {
    return {Rational(1, 3), Rational(1, 2), Rational(1), Rational(2)};
}

inline ClassificationReport classify(const CartanParams& params, const Rational& mu,
                                     const std::vector<Rational>& alphas = default_alphas()) {
    ClassificationReport rpt;
    rpt.params = params;
    rpt.mu = mu;
    const BallVerdict ball = is_unit_ball(params, mu);
    rpt.is_ball = ball.is_ball;
    rpt.q_constant = ball.q_poly.degree() == 0;
    rpt.q_poly = ball.q_poly;
    const KEWitness ke = ke_identity(params, mu);
    rpt.ke_identity_holds = ke.delta.has_value();
    rpt.ke_delta = ke.delta;
    for (const auto& a : alphas)
        rpt.proj_induced.emplace_back(a, proj_induced_dual(params, mu, a).induced);
    rpt.dual_bound = dual_positivity_bound(params, mu);
    rpt.kob_alpha = kob_proportionality(params, mu);
    return rpt;
}

} // namespace hartogs
