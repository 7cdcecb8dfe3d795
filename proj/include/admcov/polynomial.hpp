#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "admcov/errors.hpp"
#include "admcov/rational.hpp"

namespace admcov {

// Univariate polynomial over Q, coefficients by increasing degree.
class PolynomialQ {
public:
    PolynomialQ() = default;
    explicit PolynomialQ(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static PolynomialQ constant(const Rational& a) { return PolynomialQ({a}); }
    static PolynomialQ monomial(const Rational& a, int deg) {
        std::vector<Rational> c(deg + 1, Rational(0));
        c[deg] = a;
        return PolynomialQ(std::move(c));
    }
    // (1 + t)^n, n >= 0
    static PolynomialQ one_plus_t_pow(int n) {
        std::vector<Rational> c(n + 1);
        Integer b = 1;
        for (int k = 0; k <= n; ++k) {
            c[k] = Rational(b);
            b = b * (n - k) / (k + 1);
        }
        return PolynomialQ(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Rational(0); }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (int k = degree(); k >= 0; --k) acc = acc * x + c_[k];
        return acc;
    }

    friend PolynomialQ operator+(const PolynomialQ& a, const PolynomialQ& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return PolynomialQ(std::move(c));
    }
    friend PolynomialQ operator-(const PolynomialQ& a) {
        auto c = a.c_;
        for (auto& x : c) x = -x;
        return PolynomialQ(std::move(c));
    }
    friend PolynomialQ operator-(const PolynomialQ& a, const PolynomialQ& b) { return a + (-b); }
    friend PolynomialQ operator*(const PolynomialQ& a, const PolynomialQ& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return PolynomialQ(std::move(c));
    }
    friend PolynomialQ operator*(const Rational& s, const PolynomialQ& a) { return constant(s) * a; }
    friend bool operator==(const PolynomialQ& a, const PolynomialQ& b) { return a.c_ == b.c_; }

    // Euclidean division: a = q*b + r.
    static std::pair<PolynomialQ, PolynomialQ> divmod(const PolynomialQ& a, const PolynomialQ& b) {
        if (b.is_zero()) throw InputError("polynomial division by zero");
        std::vector<Rational> r = a.c_, q(std::max(0, a.degree() - b.degree() + 1), Rational(0));
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            Rational f = r[k + b.degree()] / b.leading();
            q[k] = f;
            for (int j = 0; j <= b.degree(); ++j) r[k + j] -= f * b.c_[j];
        }
        return {PolynomialQ(std::move(q)), PolynomialQ(std::move(r))};
    }

    PolynomialQ monic() const {
        if (is_zero()) return *this;
        Rational l = leading();
        auto c = c_;
        for (auto& x : c) x /= l;
        return PolynomialQ(std::move(c));
    }

    static PolynomialQ gcd(PolynomialQ a, PolynomialQ b) {
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // e.g. "-1/8*t^3 + 9/4*t^2 - t"
    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (int k = degree(); k >= 0; --k) {
            const Rational& a = c_[k];
            if (a == 0) continue;
            bool neg = a < 0;
            Rational m = neg ? Rational(-a) : a;
            if (s.empty())
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            bool unit = m == 1;
            if (k == 0 || !unit) s += admcov::to_string(m);
            if (k > 0) {
                if (!unit) s += "*";
                s += var;
                if (k > 1) s += "^" + std::to_string(k);
            }
        }
        return s;
    }

private:
    void trim() {
        for (auto& x : c_) x.canonicalize();
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// num/den in lowest terms with monic denominator.
class RationalFunction1V {
public:
    RationalFunction1V() : num_(), den_(PolynomialQ::constant(1)) {}
    RationalFunction1V(PolynomialQ num, PolynomialQ den) {
        if (den.is_zero()) throw InputError("zero denominator");
        auto g = PolynomialQ::gcd(num, den);
        if (!num.is_zero()) {
            num = PolynomialQ::divmod(num, g).first;
            den = PolynomialQ::divmod(den, g).first;
        } else {
            den = PolynomialQ::constant(1);
        }
        Rational l = den.leading();
        num_ = PolynomialQ::constant(1 / l) * num;
        den_ = den.monic();
    }

    const PolynomialQ& num() const { return num_; }
    const PolynomialQ& den() const { return den_; }

    friend bool operator==(const RationalFunction1V& a, const RationalFunction1V& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    // Taylor coefficients [t^0..t^N] by long division.
    std::vector<Rational> taylor(int N) const {
        Rational d0 = den_.coeff(0);
        if (d0 == 0) throw InputError("rational function has a pole at 0");
        std::vector<Rational> a(N + 1, Rational(0));
        for (int n = 0; n <= N; ++n) {
            Rational s = num_.coeff(n);
            for (int k = 1; k <= std::min(n, den_.degree()); ++k) s -= den_.coeff(k) * a[n - k];
            a[n] = s / d0;
        }
        return a;
    }

    std::string to_string() const {
        if (den_.degree() == 0) return "(" + num_.to_string() + ")";
        return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
    }

private:
    PolynomialQ num_, den_;
};

// value_n = n! [t^n] f
inline std::vector<Rational> egf_values(const RationalFunction1V& f, int N) {
    auto a = f.taylor(N);
    for (int n = 0; n <= N; ++n) a[n] *= factorial(static_cast<unsigned>(n));
    return a;
}

// Lagrange interpolation through the first degree_bound+1 points; the
// remaining points must lie on the result.
inline PolynomialQ interpolate(const std::vector<std::pair<Rational, Rational>>& points, int degree_bound) {
    if (degree_bound < 0) throw InputError("negative degree bound");
    if (static_cast<int>(points.size()) < degree_bound + 1) throw InputError("not enough interpolation points");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first) throw InputError("repeated abscissa");
    int m = degree_bound + 1;
    PolynomialQ result;
    for (int i = 0; i < m; ++i) {
        PolynomialQ basis = PolynomialQ::constant(1);
        Rational denom = 1;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            basis = basis * PolynomialQ({-points[j].first, Rational(1)});
            denom *= points[i].first - points[j].first;
        }
        result = result + PolynomialQ::constant(points[i].second / denom) * basis;
    }
    for (std::size_t i = m; i < points.size(); ++i)
        if (result.eval(points[i].first) != points[i].second)
            throw ConsistencyError("point " + to_string(points[i].first) + " does not lie on the interpolant");
    return result;
}

// chi(H_{g,n}) as a polynomial in g: degree at most n - 2 for even n and
// n - 3 for odd n.
inline int fn_degree_bound(int n) { return std::max(0, n % 2 == 0 ? n - 2 : n - 3); }

inline PolynomialQ interpolate_Fn(const std::vector<std::pair<Rational, Rational>>& points, int degree_bound) {
    return interpolate(points, degree_bound);
}

}  // namespace admcov
