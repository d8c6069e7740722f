#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "hartogs/classify.hpp"

using namespace hartogs;

namespace {

Rational R(long long n, long long d = 1) { return Rational(n, d); }

std::vector<Rational> mu_grid() { return {R(1, 2), R(1), R(3, 2), R(2), R(3)}; }

std::vector<CartanParams> param_grid(int rmax, int amax, int bmax) {
    std::vector<CartanParams> out;
    for (int r = 1; r <= rmax; ++r)
        for (int a = 0; a <= (r == 1 ? 0 : amax); ++a)
            for (int b = 0; b <= bmax; ++b) out.push_back(make_params(r, a, b));
    return out;
}

} // namespace

TEST_CASE("is_unit_ball", "[classify]") {
    SECTION("(1,0,0), mu=1 is the ball, Q = 2 = (1+1)!") {
        const auto v = is_unit_ball(make_params(1, 0, 0), R(1));
        CHECK(v.is_ball);
        CHECK(v.q_poly == ExactPoly::constant(2));
        CHECK(v.big_d + 1 == 3);
    }
    SECTION("(1,0,0), mu=2 is not (Q = 6+2X non-constant)") {
        const auto v = is_unit_ball(make_params(1, 0, 0), R(2));
        CHECK_FALSE(v.is_ball);
        CHECK(v.q_poly.degree() == 1);
    }
    SECTION("(2,1,0), mu=1 is not (higher rank)") {
        CHECK_FALSE(is_unit_ball(make_params(2, 1, 0), R(1)).is_ball);
    }
    SECTION("ball cases for n = 1,2,3 carry Q = (n+1)!") {
        for (int n = 1; n <= 3; ++n) {
            const auto v = is_unit_ball(make_params(1, 0, n - 1), R(1));
            CHECK(v.is_ball);
            CHECK(v.q_poly ==
                  ExactPoly::constant(Rational(factorial(static_cast<unsigned>(n) + 1))));
            CHECK(v.big_d + 1 == n + 2);
        }
    }
}

TEST_CASE("condchi_identity", "[classify]") {
    SECTION("ball family: true at d=n+2, c=(n+1)! for n=1,2,3") {
        for (int n = 1; n <= 3; ++n)
            CHECK(condchi_identity(make_params(1, 0, n - 1), R(1), n + 2,
                                   Rational(factorial(static_cast<unsigned>(n) + 1))));
    }
    SECTION("(1,0,0), mu=2, d=3: false for every candidate c") {
        // greatest root of the left side is -1/mu = -1/2, not an integer
        for (const auto& c : {R(1), R(2), R(6), R(24), R(3, 2)})
            CHECK_FALSE(condchi_identity(make_params(1, 0, 0), R(2), 3, c));
    }
    SECTION("(2,2,0), mu=1: false for a spread of (d,c)") {
        for (int d = 2; d <= 8; ++d)
            for (const auto& c : {R(1), R(2), R(6), R(120)})
                CHECK_FALSE(condchi_identity(make_params(2, 2, 0), R(1), d, c));
    }
    SECTION("wrong c fails even on the ball") {
        CHECK_FALSE(condchi_identity(make_params(1, 0, 0), R(1), 3, R(3)));
    }
}

TEST_CASE("ke_identity", "[classify]") {
    SECTION("(1,0,0), mu=1: U=6, V=12, delta=1/2") {
        const auto wit = ke_identity(make_params(1, 0, 0), R(1));
        CHECK(wit.u == ExactPoly::constant(6));
        CHECK(wit.v == ExactPoly::constant(12));
        // W = (n+2)^{n+1} Q^{n+2} (1-X)^{n+2} = 9*8*(1-X)^3
        CHECK(wit.w == Rational(72) * ExactPoly({R(1), R(-1)}).pow(3));
        REQUIRE(wit.delta.has_value());
        CHECK(*wit.delta == R(1, 2));
        CHECK(wit.residual.is_zero());
    }
    SECTION("ball cases give delta = 1/(n+1)!") {
        for (int n = 1; n <= 3; ++n) {
            const auto wit = ke_identity(make_params(1, 0, n - 1), R(1));
            REQUIRE(wit.delta.has_value());
            CHECK(*wit.delta == Rational(1) / Rational(factorial(static_cast<unsigned>(n) + 1)));
        }
    }
    SECTION("(1,0,0), mu=2: no delta, residual is the certificate") {
        const auto wit = ke_identity(make_params(1, 0, 0), R(2));
        CHECK_FALSE(wit.delta.has_value());
        CHECK_FALSE(wit.residual.is_zero());
        // the certificate really is LHS - delta_fit * RHS for the built polys:
        // it must vanish nowhere proportionality would force it to
        CHECK(wit.residual.degree() >= 0);
    }
    SECTION("witness polynomials match their definitions on a non-trivial case") {
        const auto params = make_params(2, 1, 1);
        const Rational mu = R(3, 2);
        const auto rep = f_rational(params, mu);
        const auto wit = ke_identity(params, mu);
        const ExactPoly x({R(0), R(1)}), omx({R(1), R(-1)});
        const ExactPoly& q = rep.q_poly;
        const ExactPoly u_expected = mu * (x * omx * q.derivative()) +
                                     (mu * R(rep.big_d + 1)) * (x * q) +
                                     (R(params.gamma) + mu) * (omx * q);
        CHECK(wit.u == u_expected);
        const ExactPoly v_expected =
            ((q.derivative() + x * q.derivative().derivative()) * q -
             x * (q.derivative() * q.derivative())) *
                (omx * omx) +
            R(rep.big_d + 1) * (q * q);
        CHECK(wit.v == v_expected);
        Rational npow = 1;
        for (int i = 0; i <= params.n; ++i) npow *= R(params.n + 2);
        CHECK(wit.w == npow * (q.pow(static_cast<unsigned>(params.n) + 2) *
                               omx.pow(static_cast<unsigned>(params.n) + 2)));
        // and the residual certificate equals the literal difference
        const ExactPoly lhs = wit.u.pow(static_cast<unsigned>(params.n)) * wit.v *
                              omx.pow(static_cast<unsigned>(rep.big_d) + 1);
        CHECK_FALSE(wit.delta.has_value());
        const ExactPoly rhs = q * wit.w;
        // residual = lhs - delta_fit*rhs with delta_fit from leading coefficients
        const Rational delta_fit = lhs.leading() / rhs.leading();
        CHECK(wit.residual == lhs - delta_fit * rhs);
    }
}

TEST_CASE("proj_induced_dual", "[classify]") {
    const auto disc = make_params(1, 0, 0);
    SECTION("(1,0,0), mu=1, alpha=1: quotient (1+X)^3/2") {
        const auto res = proj_induced_dual(disc, R(1), R(1));
        CHECK(res.induced);
        REQUIRE(res.quotient.has_value());
        CHECK(*res.quotient == R(1, 2) * ExactPoly({R(1), R(1)}).pow(3));
    }
    SECTION("(1,0,0), mu=2, alpha=1: 6-2X does not divide (1+X)^3") {
        const auto res = proj_induced_dual(disc, R(2), R(1));
        CHECK_FALSE(res.induced);
    }
    SECTION("(1,0,0), mu=1, alpha=1/2: (D+1)alpha = 3/2 not an integer") {
        const auto res = proj_induced_dual(disc, R(1), R(1, 2));
        CHECK_FALSE(res.induced);
        CHECK(res.obstruction.find("not a positive integer") != std::string::npos);
    }
    SECTION("(1,0,0), mu=1, alpha=1/3: non-integer alpha with constant Q is induced") {
        const auto res = proj_induced_dual(disc, R(1), R(1, 3));
        CHECK(res.induced);
    }
    SECTION("monotone consistency: non-constant Q is never induced") {
        for (const auto& alpha : {R(1, 3), R(1, 2), R(1), R(2), R(3), R(5, 3)}) {
            if (is_integer(R(3) * alpha)) {
                const auto res = proj_induced_dual(disc, R(2), alpha);
                CHECK_FALSE(res.induced);
            } else {
                CHECK_FALSE(proj_induced_dual(disc, R(2), alpha).induced);
            }
        }
    }
    SECTION("alpha must be positive") {
        CHECK_THROWS_AS(proj_induced_dual(disc, R(1), R(0)), InvalidArgument);
        CHECK_THROWS_AS(proj_induced_dual(disc, R(1), R(-2)), InvalidArgument);
    }
}

TEST_CASE("dual_positivity_bound", "[classify]") {
    const auto disc = make_params(1, 0, 0);
    SECTION("mu=2 gives 3 = (1+mu)/(mu-1)") {
        const auto y = dual_positivity_bound(disc, R(2));
        REQUIRE(y.has_value());
        CHECK(*y == Catch::Approx(3.0).epsilon(1e-12));
    }
    SECTION("mu=1: constant Q, no root, infinity") {
        CHECK_FALSE(dual_positivity_bound(disc, R(1)).has_value());
    }
    SECTION("mu=3 gives 2, with the root oracle cross-check") {
        const auto y = dual_positivity_bound(disc, R(3));
        REQUIRE(y.has_value());
        CHECK(*y == Catch::Approx(2.0).epsilon(1e-12));
        // oracle: Q(-Y) = mu(1+mu) - mu(mu-1)Y has root (1+mu)/(mu-1)
        const auto rep = f_rational(disc, R(3));
        const auto root = smallest_positive_root(rep.q_poly.reflect(), 1e-13);
        REQUIRE(root.has_value());
        CHECK(*root == Catch::Approx(4.0 / 2.0));
    }
    SECTION("rank-one family, mu>1: bound equals (1+mu)/(mu-1) to 1e-10") {
        for (const auto& mu : {R(3, 2), R(2), R(3), R(7, 2)}) {
            const auto y = dual_positivity_bound(disc, mu);
            REQUIRE(y.has_value());
            const double expected = to_double((1 + mu) / (mu - 1));
            CHECK(std::abs(*y - expected) < 1e-10);
        }
    }
}

TEST_CASE("kob_proportionality", "[classify]") {
    SECTION("(1,0,0), mu=1: alpha = 3 = n+2 = (gamma+mu)/mu") {
        const auto alpha = kob_proportionality(make_params(1, 0, 0), R(1));
        REQUIRE(alpha.has_value());
        CHECK(*alpha == 3);
    }
    SECTION("(1,0,0), mu=2: two partial-fraction terms, none") {
        CHECK_FALSE(kob_proportionality(make_params(1, 0, 0), R(2)).has_value());
    }
    SECTION("(2,1,0), mu=1: none") {
        CHECK_FALSE(kob_proportionality(make_params(2, 1, 0), R(1)).has_value());
    }
    SECTION("ball family: alpha = n+2") {
        for (int n = 1; n <= 4; ++n) {
            const auto alpha = kob_proportionality(make_params(1, 0, n - 1), R(1));
            REQUIRE(alpha.has_value());
            CHECK(*alpha == n + 2);
        }
    }
}

TEST_CASE("Theorem-level predicate agreement on the sweep grid", "[classify][sweep]") {
    // Reduced grid here; the full r<=3, a<=4, b<=4 grid runs in the
    // acceptance suite.
    int balls_seen = 0;
    for (const auto& params : param_grid(2, 2, 2)) {
        for (const auto& mu : mu_grid()) {
            const auto rpt = classify(params, mu);
            const bool any_proj = [&] {
                for (const auto& [a, ok] : rpt.proj_induced)
                    if (ok) return true;
                return false;
            }();
            INFO("r=" << params.r << " a=" << params.a << " b=" << params.b
                      << " mu=" << to_string(mu));
            CHECK(rpt.is_ball == rpt.ke_identity_holds);
            CHECK(rpt.is_ball == any_proj);
            CHECK(rpt.is_ball == rpt.kob_alpha.has_value());
            CHECK(rpt.is_ball == rpt.q_constant);
            if (rpt.is_ball) {
                ++balls_seen;
                CHECK_FALSE(rpt.dual_bound.has_value()); // infinity
                CHECK(params.r == 1);
                CHECK(mu == 1);
            }
        }
    }
    CHECK(balls_seen == 3); // (1,0,b) for b=0,1,2 at mu=1
}
