#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hartogs/classify.hpp"
#include "hartogs/geometry.hpp"

using namespace hartogs;
using Complex = std::complex<double>;

namespace {

Rational R(long long n, long long d = 1) { return Rational(n, d); }

const std::vector<std::vector<double>> kInteriorPoints = {
    {0.0, 0.0, 0.0, 0.0},
    {0.2, 0.1, 0.15, -0.05},
    {-0.25, 0.2, 0.1, 0.1},
    {0.1, -0.3, 0.2, 0.05},
    {0.15, 0.15, -0.2, 0.1},
};

// Closed-form dual-metric curvature at (0, iv) for base B^1, mu=2, plane
// span{d/dx, d/dv}.
double dual_curvature_formula(double v) {
    const double v2 = v * v, v4 = v2 * v2, v6 = v4 * v2, v8 = v4 * v4;
    const double num = v8 + 12 * v6 - 26 * v4 + 12 * v2 - 15;
    const double den = 12 * (v2 - 1) * (v2 - 1) * (v4 - 2 * v2 + 5);
    return num / den;
}

// Closed-form complex Hessian of the B^2 Bergman potential -3 log(1-rho):
// h_ij = 3 [ (1-rho) delta_ij + conj(z_i) z_j ] / (1-rho)^2.
Eigen::Matrix2cd ball_metric_exact(const std::vector<double>& p) {
    const Complex z1(p[0], p[1]), z2(p[2], p[3]);
    const double rho = std::norm(z1) + std::norm(z2);
    Eigen::Matrix2cd h;
    const Complex zs[2] = {z1, z2};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            h(i, j) = 3.0 *
                      ((i == j ? (1 - rho) : 0.0) + std::conj(zs[i]) * zs[j]) /
                      ((1 - rho) * (1 - rho));
    return h;
}

} // namespace

TEST_CASE("kernel_eval", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    SECTION("mu=1 at the origin: 2/pi") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const std::vector<Complex> z = {Complex(0, 0)};
        CHECK(kernel_eval(field, z, Complex(0, 0)) ==
              Catch::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
    }
    SECTION("mu=2 at the origin: 3/pi") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(2));
        const std::vector<Complex> z = {Complex(0, 0)};
        CHECK(kernel_eval(field, z, Complex(0, 0)) ==
              Catch::Approx(3.0 / std::numbers::pi).epsilon(1e-14));
    }
    SECTION("divergence like (1-|z|^2)^{-gamma-mu} toward the base boundary") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        double last = 0;
        for (const double t : {0.9, 0.99, 0.999}) {
            const std::vector<Complex> z = {Complex(t, 0)};
            const double k = kernel_eval(field, z, Complex(0, 0));
            CHECK(k > last);
            // exponent check: K ~ C (1-t^2)^{-3} for gamma+mu = 3
            const double ratio = k * std::pow(1 - t * t, 3.0);
            CHECK(ratio == Catch::Approx(2.0 / std::numbers::pi).margin(1e-3));
            last = k;
        }
    }
    SECTION("outside the domain") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const std::vector<Complex> z = {Complex(0.5, 0)};
        CHECK_THROWS_AS(kernel_eval(field, z, Complex(0.9, 0)), DomainViolation);
        const std::vector<Complex> zb = {Complex(1.0, 0)};
        CHECK_THROWS_AS(kernel_eval(field, zb, Complex(0, 0)), DomainViolation);
    }
    SECTION("agrees with a 200-term truncation of the defining series") {
        for (const auto& mu : {R(1), R(2), R(5, 2)}) {
            const PotentialField field(FieldKind::BergmanLog, disc, mu);
            const auto f = f_series(disc, mu, 200);
            const double gamma_mu = disc.gamma + to_double(mu);
            const double chi0 = 1.0, volume = std::numbers::pi;
            for (const auto& [zr, wr] : {std::pair{0.3, 0.4}, {0.0, 0.6}, {0.5, 0.3}}) {
                const std::vector<Complex> z = {Complex(zr, 0)};
                const double n = 1 - zr * zr;
                const double x = wr * wr / std::pow(n, to_double(mu));
                REQUIRE(x <= 0.5);
                double series = 0, xp = 1;
                for (const auto& fm : f) {
                    series += to_double(fm) * xp;
                    xp *= x;
                }
                series *= std::pow(n, -gamma_mu) / (to_double(mu) * chi0 * volume);
                const double closed = kernel_eval(field, z, Complex(wr, 0));
                CHECK(std::abs(closed - series) / series < 1e-12);
            }
        }
    }
    SECTION("closed form of the kernel (Stirling sum) agrees with the rational form") {
        // Independent oracle: N^{mu-gamma}/(mu chi(0) V) *
        //   sum_m a_m mu^m sum_q S(m,q) q! |w|^{2(q-1)}/(N^mu - |w|^2)^{q+1}
        for (const auto& mu : {R(1), R(2), R(7, 3)}) {
            const PotentialField field(FieldKind::BergmanLog, disc, mu);
            const auto chi = build_chi(disc);
            const auto table = stirling2_table(static_cast<unsigned>(chi.big_d));
            const double mu_d = to_double(mu);
            for (const auto& [zr, wr] : {std::pair{0.45, 0.2}, {0.1, 0.5}}) {
                const double n = 1 - zr * zr;
                const double nmu = std::pow(n, mu_d);
                const double w2 = wr * wr;
                REQUIRE(w2 < nmu);
                double sum = 0;
                for (int m = 0; m <= chi.big_d; ++m)
                    for (int q = 1; q <= m; ++q)
                        sum += to_double(chi.a_coeffs[static_cast<std::size_t>(m)]) *
                               std::pow(mu_d, m) *
                               table[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)]
                                   .convert_to<double>() *
                               to_double(Rational(factorial(static_cast<unsigned>(q)))) *
                               std::pow(w2, q - 1) / std::pow(nmu - w2, q + 1);
                const double oracle = std::pow(n, mu_d - disc.gamma) /
                                      (mu_d * 1.0 * std::numbers::pi) * sum;
                const std::vector<Complex> z = {Complex(zr, 0)};
                const double closed = kernel_eval(field, z, Complex(wr, 0));
                CHECK(std::abs(closed - oracle) / oracle < 1e-12);
            }
        }
    }
}

TEST_CASE("dual_kernel_eval", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    const PotentialField dual(FieldKind::DualBergmanLog, disc, R(2));
    const std::vector<Complex> z0 = {Complex(0, 0)};
    SECTION("inside the dual domain: positive") {
        CHECK(dual_kernel_eval(dual, z0, Complex(1.0, 0)) > 0);
    }
    SECTION("positivity violation at Y >= Y* = 3") {
        // |w|^2 = 3.0001 is past the bound, 2.9999 is just inside
        CHECK_THROWS_AS(dual_kernel_eval(dual, z0, Complex(std::sqrt(3.0001), 0)),
                        DomainViolation);
        CHECK_THROWS_AS(dual_kernel_eval(dual, z0, Complex(2.0, 0)), DomainViolation);
        CHECK(dual_kernel_eval(dual, z0, Complex(std::sqrt(2.9999), 0)) > 0);
    }
    SECTION("at the origin the dual kernel equals the Bergman kernel") {
        const PotentialField bergman(FieldKind::BergmanLog, disc, R(2));
        CHECK(dual_kernel_eval(dual, z0, Complex(0, 0)) ==
              Catch::Approx(kernel_eval(bergman, z0, Complex(0, 0))).epsilon(1e-14));
    }
}

TEST_CASE("metric_tensor", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    SECTION("ball at the origin: h = (n+2) I = 3 I") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const auto sample = metric_tensor(field, std::vector<double>{0, 0, 0, 0}, 1e-3);
        CHECK(std::abs(sample.h_complex(0, 0).real() - 3.0) < 1e-10);
        CHECK(std::abs(sample.h_complex(1, 1).real() - 3.0) < 1e-10);
        CHECK(std::abs(sample.h_complex(0, 1)) < 1e-10);
        // real metric is 2*Re(h) on the diagonal blocks
        CHECK(sample.g(0, 0) == Catch::Approx(6.0).margin(1e-9));
        CHECK(sample.g.rows() == 4);
    }
    SECTION("ball matches the closed-form Hessian at interior points") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        for (const auto& p : kInteriorPoints) {
            const auto sample = metric_tensor(field, p, 1e-3);
            const auto exact = ball_metric_exact(p);
            CHECK((sample.h_complex - exact).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SECTION("dual field, mu=2: h(0) = diag(4, 10/3); PD at interior points") {
        const PotentialField field(FieldKind::DualBergmanLog, disc, R(2));
        const auto s0 = metric_tensor(field, std::vector<double>{0, 0, 0, 0}, 1e-3);
        CHECK(std::abs(s0.h_complex(0, 0).real() - 4.0) < 1e-9);
        CHECK(std::abs(s0.h_complex(1, 1).real() - 10.0 / 3.0) < 1e-9);
        // frozen high-precision values at (0, 0.5i)
        const auto s5 = metric_tensor(field, std::vector<double>{0, 0, 0, 0.5}, 1e-3);
        CHECK(s5.h_complex(0, 0).real() == Catch::Approx(2.61818181818).epsilon(1e-8));
        CHECK(s5.h_complex(1, 1).real() == Catch::Approx(2.31669421488).epsilon(1e-8));
    }
    SECTION("Hermitian to 1e-9 everywhere sampled") {
        const PotentialField field(FieldKind::DualBergmanLog, disc, R(2));
        for (const auto& p : kInteriorPoints) {
            const auto s = metric_tensor(field, p, 1e-3);
            CHECK((s.h_complex - s.h_complex.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((s.g - s.g.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SECTION("degenerate dual metric reported with eigenvalues") {
        const PotentialField field(FieldKind::DualBergmanLog, disc, R(2));
        // the z-block of the dual metric degenerates at Y = 1 (v = 1 at z=0)
        try {
            metric_tensor(field, std::vector<double>{0, 0, 0, 1.2}, 1e-3);
            FAIL("expected DomainViolation");
        } catch (const DomainViolation& e) {
            CHECK(std::string(e.what()).find("eigenvalues") != std::string::npos);
        }
    }
    SECTION("margin precondition") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        CHECK_THROWS_AS(metric_tensor(field, std::vector<double>{0.999, 0, 0, 0}, 1e-3),
                        DomainViolation);
    }
}

TEST_CASE("ricci_tensor and ke_residual", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    SECTION("ball: Ric = -h (Einstein, lambda = -1)") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        for (const auto& p : {kInteriorPoints[0], kInteriorPoints[1]}) {
            const auto ric = ricci_tensor(field, p, 1e-3);
            const auto exact = ball_metric_exact(p);
            CHECK((ric + exact).cwiseAbs().maxCoeff() < 1e-5);
        }
    }
    SECTION("ball ke_residual: lambda = -1, residual < 1e-4 at 5 points") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const auto fit = ke_residual(field, kInteriorPoints, 1e-3);
        CHECK(std::abs(fit.lambda + 1.0) < 1e-6);
        CHECK(fit.max_residual < 1e-4);
    }
    SECTION("mu=2 Bergman metric is not Einstein: residual > 1e-2") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(2));
        const auto fit = ke_residual(field, kInteriorPoints, 1e-3);
        CHECK(fit.max_residual > 1e-2);
    }
    SECTION("KobLog with mu = gamma/(n+1) = 1 is Einstein") {
        const PotentialField field(FieldKind::KobLog, disc, R(1));
        const auto fit = ke_residual(field, kInteriorPoints, 1e-3);
        CHECK(fit.max_residual < 1e-4);
        // phi = -log(1-rho) on C^2: Ric = -(m+1) h with m = 2
        CHECK(fit.lambda == Catch::Approx(-3.0).margin(1e-5));
    }
    SECTION("KobLog with mu != gamma/(n+1) is not Einstein") {
        const PotentialField field(FieldKind::KobLog, disc, R(2));
        const auto fit = ke_residual(field, kInteriorPoints, 1e-3);
        CHECK(fit.max_residual > 1e-2);
    }
    SECTION("single-point input is an error") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const std::vector<std::vector<double>> one = {kInteriorPoints[0]};
        CHECK_THROWS_AS(ke_residual(field, one, 1e-3), InvalidArgument);
    }
}

TEST_CASE("ode_residual", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    const std::vector<double> samples = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    SECTION("(1,0,0), mu=1: delta = 1/2, residual < 1e-12") {
        const auto fit = ode_residual(disc, R(1), samples);
        CHECK(fit.delta == Catch::Approx(0.5).epsilon(1e-12));
        CHECK(fit.max_residual < 1e-12);
    }
    SECTION("(1,0,0), mu=2: residual bounded away from zero") {
        const auto fit = ode_residual(disc, R(2), samples);
        CHECK(fit.max_residual > 1e-3);
    }
    SECTION("(1,0,1), mu=1 (n=2): delta = 1/6") {
        const auto fit = ode_residual(make_params(1, 0, 1), R(1), samples);
        CHECK(fit.delta == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(fit.max_residual < 1e-12);
    }
    SECTION("agreement with ke_identity on a small grid") {
        for (int r = 1; r <= 2; ++r)
            for (int a = 0; a <= (r == 1 ? 0 : 2); ++a)
                for (int b = 0; b <= 2; ++b)
                    for (const auto& mu : {R(1, 2), R(1), R(2)}) {
                        const auto params = make_params(r, a, b);
                        const auto wit = ke_identity(params, mu);
                        const auto fit = ode_residual(params, mu, samples);
                        INFO("r=" << r << " a=" << a << " b=" << b << " mu=" << to_string(mu));
                        if (wit.delta.has_value())
                            CHECK(fit.max_residual < 1e-8);
                        else
                            CHECK(fit.max_residual > 1e-8);
                    }
    }
    SECTION("samples outside (0,1) rejected") {
        CHECK_THROWS_AS(ode_residual(disc, R(1), std::vector<double>{0.0, 0.5}),
                        DomainViolation);
        CHECK_THROWS_AS(ode_residual(disc, R(1), std::vector<double>{0.5, 1.0}),
                        DomainViolation);
    }
}

TEST_CASE("sectional curvature", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    const std::vector<double> ex = {1, 0, 0, 0}; // d/dx (base real direction)
    const std::vector<double> ev = {0, 0, 0, 1}; // d/dv (fiber imaginary direction)

    SECTION("dual metric, mu=2, at (0, iv): matches the closed form") {
        const PotentialField field(FieldKind::DualBergmanLog, disc, R(2));
        for (const double v : {0.0, 0.25, 0.5, 0.75}) {
            const std::vector<double> p = {0, 0, 0, v};
            const double k = sectional_curvature(field, p, ex, ev, 1e-3);
            const double expected = dual_curvature_formula(v);
            INFO("v = " << v << " K = " << k << " formula = " << expected);
            CHECK(std::abs(k - expected) / std::abs(expected) < 1e-3);
        }
        // v = 0 value is -1/4, v = 1/2 value is -3439/7884
        const double k0 =
            sectional_curvature(field, std::vector<double>{0, 0, 0, 0}, ex, ev, 1e-3);
        CHECK(k0 == Catch::Approx(-0.25).epsilon(1e-4));
        const double k5 =
            sectional_curvature(field, std::vector<double>{0, 0, 0, 0.5}, ex, ev, 1e-3);
        CHECK(k5 == Catch::Approx(-3439.0 / 7884.0).epsilon(1e-4));
    }
    SECTION("blow-up toward |v| = 1: strictly decreasing, large negative") {
        const PotentialField field(FieldKind::DualBergmanLog, disc, R(2));
        double last = 0;
        for (const double v : {0.95, 0.98, 0.99}) {
            const double step = std::min(1e-3, (1 - v) / 16);
            const double k = sectional_curvature(field, std::vector<double>{0, 0, 0, v}, ex,
                                                 ev, step);
            INFO("v = " << v << " K = " << k << " formula = " << dual_curvature_formula(v));
            CHECK(k < -10.0);
            CHECK(k < last);
            // still tracks the closed form loosely near the degeneracy
            CHECK(std::abs(k - dual_curvature_formula(v)) / std::abs(dual_curvature_formula(v)) <
                  0.05);
            last = k;
        }
    }
    SECTION("ball: constant holomorphic sectional curvature 2/3") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const std::vector<double> ey = {0, 1, 0, 0};
        for (const auto& p : {kInteriorPoints[0], kInteriorPoints[1]}) {
            const double k = sectional_curvature(field, p, ex, ey, 1e-3);
            CHECK(k == Catch::Approx(2.0 / 3.0).epsilon(1e-5));
        }
        // totally real plane at the origin: quarter of the holomorphic value
        const double kr = sectional_curvature(field, std::vector<double>{0, 0, 0, 0}, ex,
                                              std::vector<double>{0, 0, 1, 0}, 1e-3);
        CHECK(kr == Catch::Approx(1.0 / 6.0).epsilon(1e-5));
        // frozen oracle value at the interior point
        const double ki = sectional_curvature(field, kInteriorPoints[1], ex,
                                              std::vector<double>{0, 0, 1, 0}, 1e-3);
        CHECK(ki == Catch::Approx(0.167004276389827).epsilon(1e-5));
    }
    SECTION("plane input validation") {
        const PotentialField field(FieldKind::BergmanLog, disc, R(1));
        const std::vector<double> origin = {0, 0, 0, 0};
        CHECK_THROWS_AS(sectional_curvature(field, origin, ex, ex, 1e-3), InvalidArgument);
        const std::vector<double> zero = {0, 0, 0, 0};
        CHECK_THROWS_AS(sectional_curvature(field, origin, ex, zero, 1e-3), InvalidArgument);
    }
}

TEST_CASE("fourth-order convergence against the ball closed form", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    const PotentialField field(FieldKind::BergmanLog, disc, R(1));
    double err_coarse = 0, err_fine = 0;
    for (const auto& p : kInteriorPoints) {
        if (p[0] == 0 && p[1] == 0 && p[2] == 0 && p[3] == 0) continue; // exact at 0
        const auto exact = ball_metric_exact(p);
        const auto coarse = metric_tensor(field, p, 8e-3);
        const auto fine = metric_tensor(field, p, 4e-3);
        err_coarse = std::max(err_coarse, (coarse.h_complex - exact).cwiseAbs().maxCoeff());
        err_fine = std::max(err_fine, (fine.h_complex - exact).cwiseAbs().maxCoeff());
    }
    INFO("coarse " << err_coarse << " fine " << err_fine);
    CHECK(err_coarse / err_fine >= 8.0);
}

TEST_CASE("kernel-scale invariance of geometric outputs", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    const PotentialField base(FieldKind::DualBergmanLog, disc, R(2));
    const PotentialField scaled = base.with_kernel_scale(1000.0);
    const std::vector<double> p = {0.1, -0.05, 0.1, 0.3};
    const std::vector<double> ex = {1, 0, 0, 0}, evdir = {0, 0, 0, 1};

    const auto m0 = metric_tensor(base, p, 1e-3);
    const auto m1 = metric_tensor(scaled, p, 1e-3);
    CHECK((m0.h_complex - m1.h_complex).cwiseAbs().maxCoeff() <= 1e-10);

    const auto r0 = ricci_tensor(base, p, 1e-3);
    const auto r1 = ricci_tensor(scaled, p, 1e-3);
    CHECK((r0 - r1).cwiseAbs().maxCoeff() <= 1e-10);

    const auto k0 = sectional_curvature(base, p, ex, evdir, 1e-3);
    const auto k1 = sectional_curvature(scaled, p, ex, evdir, 1e-3);
    CHECK(std::abs(k0 - k1) <= 1e-10);

    // kernel values do scale
    const std::vector<Complex> z = {Complex(0.1, -0.05)};
    CHECK(dual_kernel_eval(scaled, z, Complex(0.1, 0.3)) ==
          Catch::Approx(1000.0 * dual_kernel_eval(base, z, Complex(0.1, 0.3))).epsilon(1e-14));
}

TEST_CASE("kob_potential_eval", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    const std::vector<Complex> z0 = {Complex(0, 0)};
    SECTION("origin gives 0") {
        CHECK(kob_potential_eval(disc, 1.0, z0, Complex(0, 0)) == 0.0);
    }
    SECTION("mu=1, |z|^2 = |w|^2 = 1/4: -log(1/2)") {
        const std::vector<Complex> z = {Complex(0.5, 0)};
        CHECK(kob_potential_eval(disc, 1.0, z, Complex(0.5, 0)) ==
              Catch::Approx(-std::log(0.5)).epsilon(1e-14));
    }
    SECTION("outside the domain") {
        const std::vector<Complex> z = {Complex(0.9, 0)};
        CHECK_THROWS_AS(kob_potential_eval(disc, 2.0, z, Complex(0.5, 0)), DomainViolation);
    }
}

TEST_CASE("float-mu escape hatch", "[geometry]") {
    const auto disc = make_params(1, 0, 0);
    // irrational mu: field still evaluates and differentiates
    const auto field = PotentialField::float_mu(FieldKind::BergmanLog, disc,
                                                std::numbers::sqrt2);
    CHECK_FALSE(field.has_exact_mu());
    CHECK_THROWS_AS(field.exact_mu(), InvalidArgument);
    const auto sample = metric_tensor(field, std::vector<double>{0, 0, 0, 0}, 1e-3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sample.h_complex);
    CHECK(es.eigenvalues().minCoeff() > 0);
    // rational mu built by the float path agrees with the exact path
    const auto f2a = PotentialField::float_mu(FieldKind::BergmanLog, disc, 2.0);
    const PotentialField f2b(FieldKind::BergmanLog, disc, R(2));
    const std::vector<double> p = {0.2, 0.1, 0.15, -0.05};
    const auto sa = metric_tensor(f2a, p, 1e-3);
    const auto sb = metric_tensor(f2b, p, 1e-3);
    CHECK((sa.h_complex - sb.h_complex).cwiseAbs().maxCoeff() < 1e-12);
}
