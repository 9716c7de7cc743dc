#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "qverify/error.hpp"

namespace qverify {

/// Exact rational number, always kept in canonical form (gcd 1, positive
/// denominator, zero is 0/1).
class Rat {
public:
    Rat() = default;
    Rat(long v) : v_(v) {}
    Rat(int v) : v_(v) {}
    Rat(long long v) : v_(static_cast<long>(v)) {}
    Rat(const mpz_class& num) : v_(num) {}
    Rat(const mpz_class& num, const mpz_class& den);
    Rat(long num, long den);
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parses "p", "-p" or "p/q" in decimal.
    static Rat parse(std::string_view text);

    const mpq_class& raw() const noexcept { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const noexcept { return sgn(v_) == 0; }
    bool is_one() const noexcept { return v_ == 1; }
    bool is_integer() const noexcept { return v_.get_den() == 1; }
    int sign() const noexcept { return sgn(v_); }

    Rat inverse() const;
    Rat abs() const { return Rat(::abs(v_)); }
    Rat pow(long e) const;

    /// Largest integer <= value / smallest integer >= value.
    long floor() const;
    long ceil() const;

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    /// "p/q", or "p" when q = 1.
    std::string str() const;

    std::size_t hash() const;

private:
    mpq_class v_;
};

/// Truncated univariate polynomial c0 + c1 u + ... + cM u^M over Rat.
/// All arithmetic is modulo u^(M+1); operands must share M.
class PolyCoeff {
public:
    PolyCoeff() = default;
    PolyCoeff(int cap, const Rat& constant);
    PolyCoeff(int cap, std::vector<Rat> coeffs);

    static PolyCoeff monomial(int cap, const Rat& c, int degree);

    int cap() const noexcept { return cap_; }
    const std::vector<Rat>& coeffs() const noexcept { return c_; }
    const Rat& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

    bool is_zero() const;
    bool is_unit() const { return !c_.empty() && !c_[0].is_zero(); }
    bool is_one() const;

    /// Lowest degree with a nonzero coefficient, or -1 for zero.
    int low_degree() const;

    PolyCoeff inverse() const;

    PolyCoeff& operator+=(const PolyCoeff& o);
    PolyCoeff& operator-=(const PolyCoeff& o);
    PolyCoeff& operator*=(const PolyCoeff& o);
    PolyCoeff& operator*=(const Rat& s);

    friend PolyCoeff operator+(PolyCoeff a, const PolyCoeff& b) { a += b; return a; }
    friend PolyCoeff operator-(PolyCoeff a, const PolyCoeff& b) { a -= b; return a; }
    friend PolyCoeff operator*(const PolyCoeff& a, const PolyCoeff& b);
    friend PolyCoeff operator-(const PolyCoeff& a);

    friend bool operator==(const PolyCoeff& a, const PolyCoeff& b);
    friend bool operator!=(const PolyCoeff& a, const PolyCoeff& b) { return !(a == b); }

    /// "c0 + c1*u + ... + cM*u^M" with zero terms omitted ("0" when zero).
    std::string str() const;

private:
    void check_mode(const PolyCoeff& o) const;

    int cap_ = 0;
    std::vector<Rat> c_{Rat(0)};
};

/// Generic coefficient operations, so the series code is written once for
/// both coefficient modes.
inline bool is_zero(const Rat& r) { return r.is_zero(); }
inline bool is_zero(const PolyCoeff& p) { return p.is_zero(); }
inline bool is_unit(const Rat& r) { return !r.is_zero(); }
inline bool is_unit(const PolyCoeff& p) { return p.is_unit(); }
inline bool is_one(const Rat& r) { return r.is_one(); }
inline bool is_one(const PolyCoeff& p) { return p.is_one(); }
Rat coeff_invert(const Rat& r);
PolyCoeff coeff_invert(const PolyCoeff& p);
inline std::string to_string(const Rat& r) { return r.str(); }
inline std::string to_string(const PolyCoeff& p) { return p.str(); }

Rat coeff_add(const Rat& a, const Rat& b);
PolyCoeff coeff_add(const PolyCoeff& a, const PolyCoeff& b);
Rat coeff_mul(const Rat& a, const Rat& b);
PolyCoeff coeff_mul(const PolyCoeff& a, const PolyCoeff& b);

/// Ring context: knows how to build constants in a coefficient mode.
template <class R>
struct Ring;

template <>
struct Ring<Rat> {
    Rat zero() const { return Rat(0); }
    Rat one() const { return Rat(1); }
    Rat from(const Rat& r) const { return r; }
    /// Rational mode has no auxiliary symbol.
    static constexpr bool symbolic = false;
};

template <>
struct Ring<PolyCoeff> {
    int cap = 0;
    PolyCoeff zero() const { return PolyCoeff(cap, Rat(0)); }
    PolyCoeff one() const { return PolyCoeff(cap, Rat(1)); }
    PolyCoeff from(const Rat& r) const { return PolyCoeff(cap, r); }
    PolyCoeff u_power(const Rat& c, int degree) const { return PolyCoeff::monomial(cap, c, degree); }
    static constexpr bool symbolic = true;
};

} // namespace qverify

template <>
struct std::hash<qverify::Rat> {
    std::size_t operator()(const qverify::Rat& r) const noexcept { return r.hash(); }
};
