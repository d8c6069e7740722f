#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hartogs/cartan.hpp"
#include "hartogs/genfun.hpp"

namespace hartogs {

enum class FieldKind { BergmanLog, DualBergmanLog, KobLog };

namespace geo {

using LD = long double;
using CLD = std::complex<LD>;
using MatLD = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using VecLD = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
using MatCLD = Eigen::Matrix<CLD, Eigen::Dynamic, Eigen::Dynamic>;

/// Q(X) of the rational form of F over long double, for arbitrary real mu>0.
/// Mirrors f_rational but without the exactness checks; used by fields built
/// with the float-mu escape hatch.
inline Polynomial<LD> q_poly_real(const CartanParams& params, LD mu) {
    const ChiData chi = build_chi(params);
    const int big_d = chi.big_d;
    Polynomial<LD> p_real;
    {
        std::vector<LD> c(chi.p.coeffs().size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = to_long_double(chi.p.coeffs()[i]);
        p_real = Polynomial<LD>(std::move(c)).compose_linear(mu, mu);
    }
    const auto stirling = stirling2_table(static_cast<unsigned>(big_d));
    std::vector<LD> b(static_cast<std::size_t>(big_d) + 1, 0.0L);
    for (int k = 0; k <= big_d; ++k)
        for (int j = k; j <= big_d; ++j)
            b[static_cast<std::size_t>(k)] +=
                p_real.coeff(static_cast<std::size_t>(j)) *
                stirling[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]
                    .convert_to<LD>();
    const Polynomial<LD> one_minus_x({1.0L, -1.0L});
    Polynomial<LD> q;
    LD kfact = 1.0L;
    for (int k = 0; k <= big_d; ++k) {
        if (k > 0) kfact *= static_cast<LD>(k);
        q = q + (b[static_cast<std::size_t>(k)] * kfact) *
                    (Polynomial<LD>::monomial(1.0L, static_cast<std::size_t>(k)) *
                     one_minus_x.pow(static_cast<unsigned>(big_d - k)));
    }
    return q;
}

} // namespace geo

/// A log-potential on a Cartan-Hartogs domain over a rank-one base, in one of
/// three flavors:
///   BergmanLog      phi = log F(X) - (gamma+mu) log N,          N = 1-|z|^2
///   DualBergmanLog  phi = -log F(-Y) + (gamma+mu) log(1+|z|^2), Y-form
///   KobLog          phi = -log(N^mu - |w|^2)
/// The kernel normalization constant and any kernel scale factor enter kernel
/// values only; derivatives of the potential never see them.
class PotentialField {
public:
    PotentialField(FieldKind kind, const CartanParams& params, const Rational& mu)
        : kind_(kind), params_(params), mu_exact_(mu), mu_(to_long_double(mu)) {
        if (!(mu > 0)) throw InvalidArgument("mu must be positive");
        init_rep(f_rational(params, mu));
    }

    /// Escape hatch for irrational mu: the field is evaluated in floating
    /// point and classification-grade exactness is unavailable.
    static PotentialField float_mu(FieldKind kind, const CartanParams& params, double mu) {
        if (!(mu > 0)) throw InvalidArgument("mu must be positive");
        return PotentialField(kind, params, static_cast<geo::LD>(mu));
    }

    FieldKind kind() const { return kind_; }
    const CartanParams& params() const { return params_; }
    double mu() const { return static_cast<double>(mu_); }
    bool has_exact_mu() const { return mu_exact_.has_value(); }
    const Rational& exact_mu() const {
        if (!mu_exact_) throw InvalidArgument("field was built with float mu");
        return *mu_exact_;
    }
    int complex_dim() const { return params_.n + 1; }
    int big_d() const { return big_d_; }

    PotentialField with_kernel_scale(double s) const {
        if (!(s > 0)) throw InvalidArgument("kernel scale must be positive");
        PotentialField copy = *this;
        copy.scale_ = s;
        return copy;
    }
    double kernel_scale() const { return scale_; }

    /// Splits a real point (x_1,y_1,...,x_{n+1},y_{n+1}) into |z|^2 and |w|^2.
    struct SplitPoint {
        geo::LD z2 = 0;
        geo::LD w2 = 0;
    };
    SplitPoint split(std::span<const geo::LD> point) const {
        if (point.size() != static_cast<std::size_t>(2 * complex_dim()))
            throw InvalidArgument("point has wrong dimension");
        SplitPoint s;
        for (int i = 0; i + 2 < static_cast<int>(point.size()); i += 2)
            s.z2 += point[static_cast<std::size_t>(i)] * point[static_cast<std::size_t>(i)] +
                    point[static_cast<std::size_t>(i + 1)] * point[static_cast<std::size_t>(i + 1)];
        const auto u = point[point.size() - 2], v = point[point.size() - 1];
        s.w2 = u * u + v * v;
        return s;
    }

    bool in_domain(std::span<const geo::LD> point) const {
        const auto s = split(point);
        switch (kind_) {
            case FieldKind::BergmanLog: {
                if (s.z2 >= 1) return false;
                return s.w2 < std::pow(1 - s.z2, mu_);
            }
            case FieldKind::KobLog: {
                if (s.z2 >= 1) return false;
                return s.w2 < std::pow(1 - s.z2, mu_);
            }
            case FieldKind::DualBergmanLog: {
                const geo::LD y = s.w2 / std::pow(1 + s.z2, mu_);
                return q_ld_.evaluate(-y) > 0;
            }
        }
        return false;
    }

    /// Log-potential, additive normalization constants dropped.
    geo::LD potential(std::span<const geo::LD> point) const {
        const auto s = split(point);
        switch (kind_) {
            case FieldKind::BergmanLog: {
                require(s.z2 < 1, "base point outside the unit ball");
                const geo::LD n_mu = std::pow(1 - s.z2, mu_);
                require(s.w2 < n_mu, "fiber point outside the Hartogs domain");
                const geo::LD x = s.w2 / n_mu;
                const geo::LD f = q_ld_.evaluate(x) / std::pow(1 - x, big_d_ + 1);
                return std::log(f) - (params_.gamma + mu_) * std::log(1 - s.z2);
            }
            case FieldKind::DualBergmanLog: {
                const geo::LD nb = 1 + s.z2;
                const geo::LD y = s.w2 / std::pow(nb, mu_);
                const geo::LD q_val = q_ld_.evaluate(-y);
                require(q_val > 0, "dual kernel positivity violated");
                const geo::LD f = q_val / std::pow(1 + y, big_d_ + 1);
                return -std::log(f) + (params_.gamma + mu_) * std::log(nb);
            }
            case FieldKind::KobLog: {
                require(s.z2 < 1, "base point outside the unit ball");
                const geo::LD n_mu = std::pow(1 - s.z2, mu_);
                require(s.w2 < n_mu, "fiber point outside the Hartogs domain");
                return -std::log(n_mu - s.w2);
            }
        }
        throw InvalidArgument("unknown field kind");
    }

    /// K(z,w) resp. K*(z,w) with the full normalization 1/(mu chi(0) V) and
    /// the kernel scale.  Rank-one base with a known volume required.
    double kernel_value(std::span<const std::complex<double>> z,
                        std::complex<double> w) const {
        if (!params_.rank_one())
            throw InvalidArgument("pointwise kernels need a rank-one base");
        if (!params_.volume)
            throw InvalidArgument("kernel evaluation needs the base volume");
        if (z.size() != static_cast<std::size_t>(params_.n))
            throw InvalidArgument("z has wrong dimension");
        geo::LD z2 = 0;
        for (const auto& zi : z) z2 += static_cast<geo::LD>(std::norm(zi));
        const geo::LD w2 = static_cast<geo::LD>(std::norm(w));
        const geo::LD constant =
            static_cast<geo::LD>(scale_) /
            (mu_ * chi0_ * static_cast<geo::LD>(*params_.volume));
        switch (kind_) {
            case FieldKind::BergmanLog: {
                if (z2 >= 1) throw DomainViolation("base point outside the unit ball");
                const geo::LD n = 1 - z2;
                const geo::LD x = w2 / std::pow(n, mu_);
                if (x >= 1) throw DomainViolation("fiber point outside the Hartogs domain");
                const geo::LD f = q_ld_.evaluate(x) / std::pow(1 - x, big_d_ + 1);
                return static_cast<double>(constant * f *
                                           std::pow(n, -(params_.gamma + mu_)));
            }
            case FieldKind::DualBergmanLog: {
                const geo::LD nb = 1 + z2;
                const geo::LD y = w2 / std::pow(nb, mu_);
                const geo::LD q_val = q_ld_.evaluate(-y);
                if (q_val <= 0)
                    throw DomainViolation("dual kernel positivity violated: Q(-Y) <= 0 at Y=" +
                                          std::to_string(static_cast<double>(y)));
                const geo::LD f = q_val / std::pow(1 + y, big_d_ + 1);
                return static_cast<double>(constant * f *
                                           std::pow(nb, -(params_.gamma + mu_)));
            }
            case FieldKind::KobLog:
                throw InvalidArgument("KobLog has no kernel; use kob_potential_eval");
        }
        throw InvalidArgument("unknown field kind");
    }

    const Polynomial<geo::LD>& q_real() const { return q_ld_; }

private:
    PotentialField(FieldKind kind, const CartanParams& params, geo::LD mu)
        : kind_(kind), params_(params), mu_(mu) {
        const ChiData chi = build_chi(params);
        big_d_ = chi.big_d;
        chi0_ = to_long_double(chi.chi.evaluate(Rational(0)));
        q_ld_ = geo::q_poly_real(params, mu);
    }

    void init_rep(const FRepresentation& rep) {
        big_d_ = rep.big_d;
        q_ld_ = to_real(rep.q_poly);
        chi0_ = to_long_double(build_chi(params_).chi.evaluate(Rational(0)));
    }

    static void require(bool ok, const char* what) {
        if (!ok) throw DomainViolation(what);
    }

    FieldKind kind_;
    CartanParams params_;
    std::optional<Rational> mu_exact_;
    geo::LD mu_ = 1;
    int big_d_ = 0;
    geo::LD chi0_ = 1;
    Polynomial<geo::LD> q_ld_;
    double scale_ = 1.0;
};

namespace geo {

// Fourth-order central stencils.
inline constexpr int kOffsets1[4] = {-2, -1, 1, 2};
inline constexpr LD kCoeffs1[4] = {1.0L, -8.0L, 8.0L, -1.0L}; // /(12h)
inline constexpr int kOffsets2[5] = {-2, -1, 0, 1, 2};
inline constexpr LD kCoeffs2[5] = {-1.0L, 16.0L, -30.0L, 16.0L, -1.0L}; // /(12h^2)

/// Complex Hessian h_ij = d^2 f / dz_i dz_jbar of a real-valued f on R^{2m},
/// coordinates ordered (x_1,y_1,...,x_m,y_m), by fourth-order central
/// differences.  The mixed-partial cache is symmetric, so the result is
/// Hermitian by construction.
template <typename F>
MatCLD complex_hessian(F&& f, std::span<const LD> point, LD step, int m) {
    std::vector<LD> p(point.begin(), point.end());
    std::map<std::pair<int, int>, LD> cache;
    const auto d2 = [&](int a, int b) -> LD {
        const auto key = std::minmax(a, b);
        if (const auto it = cache.find(key); it != cache.end()) return it->second;
        LD value = 0;
        if (a == b) {
            for (int t = 0; t < 5; ++t) {
                const LD saved = p[static_cast<std::size_t>(a)];
                p[static_cast<std::size_t>(a)] += kOffsets2[t] * step;
                value += kCoeffs2[t] * f(std::span<const LD>(p));
                p[static_cast<std::size_t>(a)] = saved;
            }
            value /= 12.0L * step * step;
        } else {
            for (int s = 0; s < 4; ++s)
                for (int t = 0; t < 4; ++t) {
                    const LD sa = p[static_cast<std::size_t>(key.first)];
                    const LD sb = p[static_cast<std::size_t>(key.second)];
                    p[static_cast<std::size_t>(key.first)] += kOffsets1[s] * step;
                    p[static_cast<std::size_t>(key.second)] += kOffsets1[t] * step;
                    value += kCoeffs1[s] * kCoeffs1[t] * f(std::span<const LD>(p));
                    p[static_cast<std::size_t>(key.first)] = sa;
                    p[static_cast<std::size_t>(key.second)] = sb;
                }
            value /= 144.0L * step * step;
        }
        cache.emplace(key, value);
        return value;
    };

    MatCLD h(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
            const LD re = (d2(xi, xj) + d2(yi, yj)) / 4.0L;
            const LD im = (d2(xi, yj) - d2(yi, xj)) / 4.0L;
            h(i, j) = CLD(re, im);
        }
    return h;
}

/// Riemannian metric ds^2 = 2 Re sum h_ij dz_i dz_jbar as a real symmetric
/// matrix in the (x_1,y_1,...) basis.
inline MatLD real_metric_from_hessian(const MatCLD& h) {
    const int m = static_cast<int>(h.rows());
    MatLD g(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const LD re = 2 * h(i, j).real();
            const LD im = 2 * h(i, j).imag();
            g(2 * i, 2 * j) = re;
            g(2 * i, 2 * j + 1) = im;
            g(2 * i + 1, 2 * j) = -im;
            g(2 * i + 1, 2 * j + 1) = re;
        }
    return g;
}

inline std::string eigenvalue_list(const Eigen::SelfAdjointEigenSolver<MatCLD>& es) {
    std::ostringstream os;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        if (i) os << ", ";
        os << static_cast<double>(es.eigenvalues()[i]);
    }
    return os.str();
}

} // namespace geo

/// Pointwise metric data: the complex Hessian h_ij = d^2 phi / dz_i dz_jbar
/// and the real Riemannian metric ds^2 = 2 Re sum h_ij dz_i dz_jbar.
struct MetricSample {
    std::vector<double> point;
    Eigen::MatrixXcd h_complex;
    Eigen::MatrixXd g;
};

namespace geo {

inline std::vector<LD> to_ld(std::span<const double> p) {
    return std::vector<LD>(p.begin(), p.end());
}

inline void check_margin(const PotentialField& field, std::span<const LD> point,
                         LD margin) {
    std::vector<LD> probe(point.begin(), point.end());
    for (std::size_t a = 0; a < probe.size(); ++a) {
        for (const LD sgn : {-1.0L, 1.0L}) {
            const LD saved = probe[a];
            probe[a] += sgn * margin;
            const bool ok = field.in_domain(probe);
            probe[a] = saved;
            if (!ok)
                throw DomainViolation("point too close to the domain boundary for step-" +
                                      std::to_string(static_cast<double>(margin)) +
                                      " finite differences");
        }
    }
}

inline MatCLD hermitian_hessian_of_potential(const PotentialField& field,
                                             std::span<const LD> point, LD step) {
    return complex_hessian(
        [&](std::span<const LD> p) { return field.potential(p); }, point, step,
        field.complex_dim());
}

/// Long-double core of metric_tensor; throws on a non-PD result.
inline MatCLD metric_hessian(const PotentialField& field, std::span<const LD> point,
                             LD step) {
    check_margin(field, point, 4 * step);
    MatCLD h = hermitian_hessian_of_potential(field, point, step);
    Eigen::SelfAdjointEigenSolver<MatCLD> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0)
        throw DomainViolation(
            "metric tensor is not positive definite (eigenvalues: " + eigenvalue_list(es) +
            "); step too large or point too close to the boundary");
    return h;
}

inline LD log_det_hermitian(const MatCLD& h) {
    Eigen::SelfAdjointEigenSolver<MatCLD> es(h, Eigen::EigenvaluesOnly);
    LD acc = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const LD ev = es.eigenvalues()[i];
        if (ev <= 0)
            throw DomainViolation("metric degenerated inside a Ricci stencil (eigenvalue " +
                                  std::to_string(static_cast<double>(ev)) + ")");
        acc += std::log(ev);
    }
    return acc;
}

/// Long-double core of ricci_tensor: Ric = -dd~ log det h, nested FD.
inline MatCLD ricci_hessian(const PotentialField& field, std::span<const LD> point,
                            LD step) {
    check_margin(field, point, 8 * step);
    const auto logdet = [&](std::span<const LD> p) -> LD {
        return log_det_hermitian(
            hermitian_hessian_of_potential(field, p, step));
    };
    MatCLD ric = complex_hessian(logdet, point, step, field.complex_dim());
    return (-1.0L) * ric;
}

} // namespace geo

/// Metric tensor by fourth-order central finite differences of the
/// log-potential.  Precondition: interior point with margin >= 4*step.
inline MetricSample metric_tensor(const PotentialField& field, std::span<const double> point,
                                  double step) {
    if (!(step > 0)) throw InvalidArgument("step must be positive");
    const auto p = geo::to_ld(point);
    const geo::MatCLD h = geo::metric_hessian(field, p, static_cast<geo::LD>(step));
    MetricSample sample;
    sample.point.assign(point.begin(), point.end());
    sample.h_complex = h.cast<std::complex<double>>();
    sample.g = geo::real_metric_from_hessian(h).cast<double>();
    return sample;
}

/// Ricci tensor Ric_ij = -d^2(log det h)/dz_i dz_jbar via nested finite
/// differences of the metric.  Margin >= 8*step.
inline Eigen::MatrixXcd ricci_tensor(const PotentialField& field,
                                     std::span<const double> point, double step) {
    if (!(step > 0)) throw InvalidArgument("step must be positive");
    const auto p = geo::to_ld(point);
    return geo::ricci_hessian(field, p, static_cast<geo::LD>(step))
        .cast<std::complex<double>>();
}

struct KEFit {
    double lambda = 0;
    double max_residual = 0;
};

/// Fits lambda from the trace ratio at the first point and returns the sup
/// over points of the operator norm of Ric - lambda*h.
inline KEFit ke_residual(const PotentialField& field,
                         std::span<const std::vector<double>> points, double step) {
    if (points.size() < 2)
        throw InvalidArgument("ke_residual needs at least 2 sample points");
    KEFit fit;
    bool first = true;
    geo::LD lambda = 0;
    for (const auto& pt : points) {
        const auto p = geo::to_ld(pt);
        const geo::MatCLD h = geo::metric_hessian(field, p, static_cast<geo::LD>(step));
        const geo::MatCLD ric = geo::ricci_hessian(field, p, static_cast<geo::LD>(step));
        if (first) {
            lambda = ric.trace().real() / h.trace().real();
            fit.lambda = static_cast<double>(lambda);
            first = false;
        }
        const geo::MatCLD diff = ric - lambda * h;
        Eigen::SelfAdjointEigenSolver<geo::MatCLD> es(diff, Eigen::EigenvaluesOnly);
        const geo::LD norm = std::max(std::abs(es.eigenvalues().minCoeff()),
                                      std::abs(es.eigenvalues().maxCoeff()));
        fit.max_residual = std::max(fit.max_residual, static_cast<double>(norm));
    }
    return fit;
}

struct ODEFit {
    double delta = 0;
    double max_residual = 0;
};

/// Residual of (mu X h' + (gamma+mu)/(n+2))^n [X h']' = delta e^{(n+2)h} with
/// h = log F / (n+2).  All X-derivatives are exact symbolic derivatives of
/// the rational form, evaluated in floating point; delta is fitted at the
/// first sample.
inline ODEFit ode_residual(const CartanParams& params, const Rational& mu,
                           std::span<const double> x_samples) {
    if (x_samples.empty()) throw InvalidArgument("ode_residual needs samples");
    for (const double x : x_samples)
        if (!(x > 0 && x < 1))
            throw DomainViolation("ODE samples must lie in (0,1)");
    const FRepresentation rep = f_rational(params, mu);
    const auto q = to_real(rep.q_poly);
    const auto qp = q.derivative();
    const auto qpp = qp.derivative();
    const geo::LD mu_ld = to_long_double(mu);
    const geo::LD dp1 = rep.big_d + 1;
    const geo::LD n = params.n;
    const geo::LD gm_frac = (params.gamma + mu_ld) / (n + 2);

    ODEFit fit;
    bool first = true;
    geo::LD delta = 0;
    for (const double xd : x_samples) {
        const geo::LD x = xd;
        const geo::LD qv = q.evaluate(x);
        const geo::LD qpv = qp.evaluate(x);
        const geo::LD qppv = qpp.evaluate(x);
        // h' = (Q'/Q + (D+1)/(1-X)) / (n+2)
        const geo::LD hp = (qpv / qv + dp1 / (1 - x)) / (n + 2);
        // h'' = ((Q''Q - Q'^2)/Q^2 + (D+1)/(1-X)^2) / (n+2)
        const geo::LD hpp =
            ((qppv * qv - qpv * qpv) / (qv * qv) + dp1 / ((1 - x) * (1 - x))) / (n + 2);
        const geo::LD bracket = hp + x * hpp; // [X h']'
        geo::LD base = mu_ld * x * hp + gm_frac;
        geo::LD lhs = bracket;
        for (int i = 0; i < params.n; ++i) lhs *= base;
        const geo::LD f = qv / std::pow(1 - x, dp1); // e^{(n+2)h} = F
        if (first) {
            delta = lhs / f;
            fit.delta = static_cast<double>(delta);
            first = false;
        }
        fit.max_residual =
            std::max(fit.max_residual, static_cast<double>(std::abs(lhs - delta * f)));
    }
    return fit;
}

/// Real Riemannian sectional curvature of the 2-plane span{e1,e2}:
/// Christoffels from finite differences of g, the Riemann tensor from finite
/// differences of the Christoffels, then
///   K(Pi) = g(R(e1,e2)e1, e2) / (|e1|^2|e2|^2 - <e1,e2>^2).
/// The sign convention matches the closed-form curvature of the reference
/// dual-disc example (hyperbolic factors come out positive under it).
inline double sectional_curvature(const PotentialField& field, std::span<const double> point,
                                  std::span<const double> e1, std::span<const double> e2,
                                  double step) {
    using namespace geo;
    if (!(step > 0)) throw InvalidArgument("step must be positive");
    const int dim = 2 * field.complex_dim();
    if (static_cast<int>(point.size()) != dim || static_cast<int>(e1.size()) != dim ||
        static_cast<int>(e2.size()) != dim)
        throw InvalidArgument("point/plane have wrong dimension");
    const auto p0 = to_ld(point);
    check_margin(field, p0, 12 * static_cast<LD>(step));
    const LD h = static_cast<LD>(step);

    VecLD v1(dim), v2(dim);
    for (int i = 0; i < dim; ++i) {
        v1[i] = e1[static_cast<std::size_t>(i)];
        v2[i] = e2[static_cast<std::size_t>(i)];
    }
    if (v1.norm() == 0 || v2.norm() == 0)
        throw InvalidArgument("degenerate plane: zero direction");
    v1.normalize();
    v2.normalize();

    const auto metric_at = [&](std::span<const LD> p) -> MatLD {
        return real_metric_from_hessian(hermitian_hessian_of_potential(field, p, h));
    };

    // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    const auto christoffel_at = [&](const std::vector<LD>& p) {
        const MatLD g = metric_at(p);
        std::vector<MatLD> dg(static_cast<std::size_t>(dim));
        std::vector<LD> q(p);
        for (int a = 0; a < dim; ++a) {
            MatLD acc = MatLD::Zero(dim, dim);
            for (int t = 0; t < 4; ++t) {
                const LD saved = q[static_cast<std::size_t>(a)];
                q[static_cast<std::size_t>(a)] += kOffsets1[t] * h;
                acc += kCoeffs1[t] * metric_at(q);
                q[static_cast<std::size_t>(a)] = saved;
            }
            dg[static_cast<std::size_t>(a)] = acc / (12.0L * h);
        }
        const MatLD ginv = g.inverse();
        std::vector<MatLD> gamma(static_cast<std::size_t>(dim),
                                 MatLD::Zero(dim, dim)); // gamma[k](i,j)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                VecLD rhs(dim);
                for (int l = 0; l < dim; ++l)
                    rhs[l] = (dg[static_cast<std::size_t>(i)](j, l) +
                              dg[static_cast<std::size_t>(j)](i, l) -
                              dg[static_cast<std::size_t>(l)](i, j)) /
                             2.0L;
                const VecLD sol = ginv * rhs;
                for (int k = 0; k < dim; ++k) gamma[static_cast<std::size_t>(k)](i, j) = sol[k];
            }
        return gamma;
    };

    // Contracted Christoffels A1^l = Gamma^l(e2,e1), A2^l = Gamma^l(e1,e1).
    const auto contracted = [&](const std::vector<LD>& p) {
        const auto gamma = christoffel_at(p);
        VecLD a1(dim), a2(dim);
        for (int l = 0; l < dim; ++l) {
            a1[l] = v2.dot(gamma[static_cast<std::size_t>(l)] * v1);
            a2[l] = v1.dot(gamma[static_cast<std::size_t>(l)] * v1);
        }
        return std::pair{a1, a2};
    };

    // Directional derivatives of the contracted Christoffels along e1, e2.
    VecLD d1a1 = VecLD::Zero(dim), d2a2 = VecLD::Zero(dim);
    for (int t = 0; t < 4; ++t) {
        std::vector<LD> q(p0);
        for (int i = 0; i < dim; ++i)
            q[static_cast<std::size_t>(i)] += kOffsets1[t] * h * v1[i];
        d1a1 += kCoeffs1[t] * contracted(q).first;
        std::vector<LD> q2(p0);
        for (int i = 0; i < dim; ++i)
            q2[static_cast<std::size_t>(i)] += kOffsets1[t] * h * v2[i];
        d2a2 += kCoeffs1[t] * contracted(q2).second;
    }
    d1a1 /= 12.0L * h;
    d2a2 /= 12.0L * h;

    const MatLD g0 = metric_at(p0);
    const auto gamma0 = christoffel_at(p0);

    // R(e1,e2)e1 = [d_{e1}Gamma](e2,e1) - [d_{e2}Gamma](e1,e1)
    //            + Gamma(e1, Gamma(e2,e1)) - Gamma(e2, Gamma(e1,e1)).
    VecLD ga21(dim), ga11(dim);
    for (int l = 0; l < dim; ++l) {
        ga21[l] = v2.dot(gamma0[static_cast<std::size_t>(l)] * v1);
        ga11[l] = v1.dot(gamma0[static_cast<std::size_t>(l)] * v1);
    }
    VecLD curv = d1a1 - d2a2;
    for (int l = 0; l < dim; ++l) {
        curv[l] += v1.dot(gamma0[static_cast<std::size_t>(l)] * ga21);
        curv[l] -= v2.dot(gamma0[static_cast<std::size_t>(l)] * ga11);
    }

    const LD num = v2.dot(g0 * curv);
    const LD den = v1.dot(g0 * v1) * v2.dot(g0 * v2) - v1.dot(g0 * v2) * v1.dot(g0 * v2);
    if (!(den > 0) || den < 1e-14L)
        throw InvalidArgument("degenerate plane: vanishing Gram determinant");
    return static_cast<double>(num / den);
}

/// Kernel of the Bergman field at (z,w).
inline double kernel_eval(const PotentialField& field,
                          std::span<const std::complex<double>> z, std::complex<double> w) {
    if (field.kind() != FieldKind::BergmanLog)
        throw InvalidArgument("kernel_eval expects a BergmanLog field");
    return field.kernel_value(z, w);
}

/// Dual kernel K*(z,w) of the DualBergmanLog field.
inline double dual_kernel_eval(const PotentialField& field,
                               std::span<const std::complex<double>> z,
                               std::complex<double> w) {
    if (field.kind() != FieldKind::DualBergmanLog)
        throw InvalidArgument("dual_kernel_eval expects a DualBergmanLog field");
    return field.kernel_value(z, w);
}

/// -log(N^mu(z,zbar) - |w|^2) over a rank-one base.
inline double kob_potential_eval(const CartanParams& params, double mu,
                                 std::span<const std::complex<double>> z,
                                 std::complex<double> w) {
    if (!params.rank_one())
        throw InvalidArgument("kob_potential_eval needs a rank-one base");
    if (!(mu > 0)) throw InvalidArgument("mu must be positive");
    if (z.size() != static_cast<std::size_t>(params.n))
        throw InvalidArgument("z has wrong dimension");
    double z2 = 0;
    for (const auto& zi : z) z2 += std::norm(zi);
    if (z2 >= 1) throw DomainViolation("base point outside the unit ball");
    const double n_mu = std::pow(1 - z2, mu);
    const double w2 = std::norm(w);
    if (w2 >= n_mu) throw DomainViolation("fiber point outside the Hartogs domain");
    return -std::log(n_mu - w2);
}

} // namespace hartogs
