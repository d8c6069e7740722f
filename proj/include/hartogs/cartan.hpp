#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "hartogs/errors.hpp"
#include "hartogs/rational.hpp"

namespace hartogs {

/// Numerical invariants of an irreducible bounded symmetric (Cartan) domain.
/// gamma and n are derived from the triple (r,a,b):
///   gamma = (r-1)a + b + 2,   n = r + r(r-1)a/2 + r*b.
struct CartanParams {
    int r = 1;
    int a = 0;
    int b = 0;
    int gamma = 2;
    int n = 1;
    std::optional<double> volume; // Euclidean volume of the base, if known

    bool rank_one() const { return r == 1; }
};

inline CartanParams make_params(int r, int a, int b) {
    if (r < 1) throw InvalidArgument("rank must be positive");
    if (a < 0 || b < 0) throw InvalidArgument("a and b must be nonnegative");
    if ((static_cast<long long>(r) * (r - 1) * a) % 2 != 0)
        throw InvalidArgument("r(r-1)a must be even");
    if (r == 1 && a != 0)
        throw InvalidArgument("rank-one Cartan domains have a = 0");
    CartanParams p;
    p.r = r;
    p.a = a;
    p.b = b;
    p.gamma = (r - 1) * a + b + 2;
    p.n = r + (r * (r - 1) / 2) * a + r * b;
    if (p.rank_one()) {
        // Unit ball B^n: Euclidean volume pi^n / n!.
        double v = 1.0;
        for (int k = 1; k <= p.n; ++k) v *= std::numbers::pi / k;
        p.volume = v;
    }
    return p;
}

inline CartanParams with_volume(CartanParams p, double volume) {
    if (!(volume > 0)) throw InvalidArgument("volume must be positive");
    p.volume = volume;
    return p;
}

/// Pointwise generic-norm evaluation N(z, +/- z_bar).  Only the rank-one case
/// has a built-in formula (N = 1 - |z|^2); anything else goes through a
/// caller-supplied function, since the exact algebra never needs N pointwise.
class GenericNormEvaluator {
public:
    enum class Kind { RankOneBall, UserSupplied };
    using NormFn = std::function<double(std::span<const std::complex<double>>, int)>;

    static GenericNormEvaluator rank_one_ball(const CartanParams& params) {
        if (!params.rank_one())
            throw InvalidArgument("rank-one evaluator requires (r,a,b) = (1,0,n-1)");
        return GenericNormEvaluator(params, Kind::RankOneBall, {});
    }

    static GenericNormEvaluator user_supplied(const CartanParams& params, NormFn fn) {
        if (!fn) throw InvalidArgument("user-supplied norm function is empty");
        return GenericNormEvaluator(params, Kind::UserSupplied, std::move(fn));
    }

    Kind kind() const { return kind_; }
    const CartanParams& params() const { return params_; }

    double operator()(std::span<const std::complex<double>> z, int conj_sign) const {
        if (conj_sign != 1 && conj_sign != -1)
            throw InvalidArgument("conj_sign must be +1 or -1");
        if (kind_ == Kind::UserSupplied) return fn_(z, conj_sign);
        double norm2 = 0.0;
        for (const auto& zi : z) norm2 += std::norm(zi);
        if (conj_sign == 1) {
            if (norm2 >= 1.0)
                throw DomainViolation("generic norm: |z| >= 1 is outside the ball");
            return 1.0 - norm2;
        }
        // z_bar -> -z_bar flips the sign of the bidegree-(1,1) term.
        return 1.0 + norm2;
    }

private:
    GenericNormEvaluator(CartanParams params, Kind kind, NormFn fn)
        : params_(std::move(params)), kind_(kind), fn_(std::move(fn)) {}

    CartanParams params_;
    Kind kind_;
    NormFn fn_;
};

inline double generic_norm(const GenericNormEvaluator& ev,
                           std::span<const std::complex<double>> z, int conj_sign) {
    return ev(z, conj_sign);
}

} // namespace hartogs
