#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace psk {

// Exact rational over 64-bit integers, kept normalized (gcd 1, positive
// denominator). Magnitudes stay tiny in this project; overflow throws.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    bool is_zero() const { return num_ == 0; }
    double to_double() const { return double(num_) / double(den_); }

private:
    using i128 = __int128;

    static Rational make128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lim = 0x7fffffffffffffffLL;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("Rational: overflow");
        Rational r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }
    void normalize() { *this = make128(num_, den_); }

    long long num_ = 0;
    long long den_ = 1;
};

// Element a + b*sqrt(2) of the real quadratic field Q(sqrt(2)). Closed under
// the four field operations; enough for every constant in the classification
// tables (sqrt(2), sqrt(delta) and 2/sqrt(delta) at delta in {1/2, 1, 2}).
class RootTwo {
public:
    RootTwo() = default;
    RootTwo(long long n) : a_(n) {}
    RootTwo(const Rational& a) : a_(a) {}
    RootTwo(const Rational& a, const Rational& b) : a_(a), b_(b) {}

    static RootTwo sqrt2() { return RootTwo(Rational(0), Rational(1)); }

    const Rational& rat() const { return a_; }
    const Rational& coef_sqrt2() const { return b_; }

    friend RootTwo operator+(const RootTwo& x, const RootTwo& y) {
        return RootTwo(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend RootTwo operator-(const RootTwo& x, const RootTwo& y) {
        return RootTwo(x.a_ - y.a_, x.b_ - y.b_);
    }
    friend RootTwo operator*(const RootTwo& x, const RootTwo& y) {
        return RootTwo(x.a_ * y.a_ + Rational(2) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend RootTwo operator/(const RootTwo& x, const RootTwo& y) {
        // (a+b s)/(c+d s) = (a+b s)(c-d s)/(c^2-2 d^2)
        Rational nrm = y.a_ * y.a_ - Rational(2) * y.b_ * y.b_;
        if (nrm.is_zero()) throw std::domain_error("RootTwo: division by zero");
        RootTwo num = x * RootTwo(y.a_, -y.b_);
        return RootTwo(num.a_ / nrm, num.b_ / nrm);
    }
    RootTwo operator-() const { return RootTwo(-a_, -b_); }
    RootTwo& operator+=(const RootTwo& y) { return *this = *this + y; }
    RootTwo& operator-=(const RootTwo& y) { return *this = *this - y; }
    RootTwo& operator*=(const RootTwo& y) { return *this = *this * y; }

    friend bool operator==(const RootTwo& x, const RootTwo& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const RootTwo& x, const RootTwo& y) { return !(x == y); }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    double to_double() const { return a_.to_double() + b_.to_double() * std::sqrt(2.0); }

private:
    Rational a_, b_;
};

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const RootTwo& x) { return x.is_zero(); }
inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.to_double(); }
inline double to_double(const RootTwo& x) { return x.to_double(); }

// Complex numbers over an arbitrary real field R. std::complex is specified
// for the builtin floating types only, so the tensor layer uses this wrapper
// uniformly for both double and exact coefficients.
template <class R>
struct Cx {
    R re{};
    R im{};

    Cx() = default;
    Cx(int x) : re(R(x)) {}
    Cx(const R& r) : re(r) {}
    Cx(const R& r, const R& i) : re(r), im(i) {}

    static Cx i() { return Cx(R(0), R(1)); }

    friend Cx operator+(const Cx& a, const Cx& b) { return Cx(a.re + b.re, a.im + b.im); }
    friend Cx operator-(const Cx& a, const Cx& b) { return Cx(a.re - b.re, a.im - b.im); }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return Cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Cx operator/(const Cx& a, const Cx& b) {
        R nrm = b.re * b.re + b.im * b.im;
        return Cx((a.re * b.re + a.im * b.im) / nrm, (a.im * b.re - a.re * b.im) / nrm);
    }
    Cx operator-() const { return Cx(-re, -im); }
    Cx& operator+=(const Cx& b) { re = re + b.re; im = im + b.im; return *this; }
    Cx& operator-=(const Cx& b) { re = re - b.re; im = im - b.im; return *this; }
    Cx& operator*=(const Cx& b) { return *this = *this * b; }

    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cx& a, const Cx& b) { return !(a == b); }
};

template <class R>
Cx<R> conj(const Cx<R>& z) { return Cx<R>(z.re, -z.im); }

template <class R>
bool is_zero(const Cx<R>& z) { return is_zero(z.re) && is_zero(z.im); }

// Magnitude proxy used by residual norms: max of component magnitudes.
template <class R>
double max_abs(const Cx<R>& z) { return std::max(std::fabs(to_double(z.re)), std::fabs(to_double(z.im))); }

template <class R>
double abs2(const Cx<R>& z) {
    double x = to_double(z.re), y = to_double(z.im);
    return x * x + y * y;
}

using Cd = Cx<double>;      // working scalar
using Cq = Cx<RootTwo>;     // exact scalar for the conic-lift checks

inline Cd to_cd(const Cq& z) { return Cd(z.re.to_double(), z.im.to_double()); }

} // namespace psk
