#pragma once

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "hartogs/errors.hpp"
#include "hartogs/rational.hpp"

namespace hartogs {

/// Dense univariate polynomial over a commutative ring T, stored low degree
/// first with trailing zeros stripped.  The zero polynomial has an empty
/// coefficient vector and degree() == -1 (the "-inf" sentinel).
template <typename T>
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { normalize(); }
    explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

    static Polynomial constant(T c) { return Polynomial(std::vector<T>{std::move(c)}); }

    static Polynomial monomial(T c, std::size_t k) {
        std::vector<T> v(k + 1, T(0));
        v[k] = std::move(c);
        return Polynomial(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<T>& coeffs() const { return coeffs_; }

    /// Coefficient of X^k; zero beyond the degree.
    T coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : T(0);
    }

    const T& leading() const {
        if (is_zero()) throw InvalidArgument("leading coefficient of zero polynomial");
        return coeffs_.back();
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }

    Polynomial operator-() const {
        auto v = coeffs_;
        for (auto& c : v) c = -c;
        return Polynomial(std::move(v));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> v(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
        return Polynomial(std::move(v));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        return a + (-b);
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> v(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(v));
    }

    friend Polynomial operator*(const T& s, const Polynomial& p) {
        auto v = p.coeffs_;
        for (auto& c : v) c = s * c;
        return Polynomial(std::move(v));
    }

    Polynomial pow(unsigned e) const {
        Polynomial result = constant(T(1));
        Polynomial base = *this;
        while (e) {
            if (e & 1u) result = result * base;
            e >>= 1u;
            if (e) base = base * base;
        }
        return result;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<T> v(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = T(int(i)) * coeffs_[i];
        return Polynomial(std::move(v));
    }

    T evaluate(const T& x) const {
        T acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    /// p(aX + b), expanded.
    Polynomial compose_linear(const T& a, const T& b) const {
        Polynomial acc;
        const Polynomial lin({b, a});
        for (std::size_t i = coeffs_.size(); i-- > 0;)
            acc = acc * lin + constant(coeffs_[i]);
        return acc;
    }

    /// p(-X).
    Polynomial reflect() const {
        auto v = coeffs_;
        for (std::size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
        return Polynomial(std::move(v));
    }

    /// Euclidean division (T a field): returns {quotient, remainder} with
    /// deg(rem) < deg(divisor).
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const {
        if (divisor.is_zero()) throw InvalidArgument("division by zero polynomial");
        Polynomial rem = *this;
        if (rem.degree() < divisor.degree()) return {Polynomial{}, rem};
        std::vector<T> q(rem.coeffs_.size() - divisor.coeffs_.size() + 1, T(0));
        const T& lead = divisor.coeffs_.back();
        while (!rem.is_zero() && rem.degree() >= divisor.degree()) {
            const std::size_t shift = rem.coeffs_.size() - divisor.coeffs_.size();
            const T factor = rem.coeffs_.back() / lead;
            q[shift] = factor;
            auto v = rem.coeffs_;
            for (std::size_t i = 0; i < divisor.coeffs_.size(); ++i)
                v[i + shift] -= factor * divisor.coeffs_[i];
            v.pop_back(); // leading term cancels exactly
            rem = Polynomial(std::move(v));
        }
        return {Polynomial(std::move(q)), rem};
    }

    /// Monic polynomial gcd (T a field).
    static Polynomial gcd(Polynomial a, Polynomial b) {
        while (!b.is_zero()) {
            auto [q, r] = a.divmod(b);
            (void)q;
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero()) return a;
        const T inv_lead = T(1) / a.coeffs_.back();
        return inv_lead * a;
    }

private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
    }

    std::vector<T> coeffs_;
};

using ExactPoly = Polynomial<Rational>;

inline Polynomial<long double> to_real(const ExactPoly& p) {
    std::vector<long double> v(p.coeffs().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = to_long_double(p.coeffs()[i]);
    return Polynomial<long double>(std::move(v));
}

inline Polynomial<Rational> to_rational_poly(const Polynomial<Integer>& p) {
    std::vector<Rational> v(p.coeffs().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Rational(p.coeffs()[i]);
    return Polynomial<Rational>(std::move(v));
}

/// Ratio of two polynomials, stored with gcd(num,den)=1 and monic den.
struct ExactRationalFn {
    ExactPoly num;
    ExactPoly den;

    ExactRationalFn(ExactPoly n, ExactPoly d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw InvalidArgument("rational function with zero denominator");
        const ExactPoly g = ExactPoly::gcd(num, den);
        if (g.degree() > 0) {
            num = num.divmod(g).first;
            den = den.divmod(g).first;
        }
        const Rational lead = den.leading();
        num = (Rational(1) / lead) * num;
        den = (Rational(1) / lead) * den;
    }

    Rational evaluate(const Rational& x) const {
        const Rational d = den.evaluate(x);
        if (d == 0) throw DomainViolation("pole of rational function at x = " + to_string(x));
        return num.evaluate(x) / d;
    }
};

} // namespace hartogs
