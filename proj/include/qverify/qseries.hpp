#pragma once

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qverify/coeffring.hpp"

namespace qverify {

/// c * q^e. The exponent is a rational on the series grid.
template <class R>
struct QMon {
    R c;
    Rat e;
};

inline constexpr long kInfiniteCap = LONG_MAX / 4;

/// Truncated Laurent series in q^(1/d). Exponents are stored in grid units
/// (integers), so q^(k/d) is stored at index k. Coefficients are known
/// exactly for exponents in [v0, cap]; everything below v0 is zero and
/// nothing is known above cap.
///
/// Leading zeros are always trimmed, so v0 is the valuation whenever the
/// window holds a nonzero coefficient. A series whose window holds only
/// zeros is stored with v0 = cap + 1 and no coefficients: it means
/// O(q^(cap+1/d)). The exact zero is a separate marker.
template <class R>
class QSeries {
public:
    QSeries() = default;

    static QSeries exact_zero(const Ring<R>& ring = {}, int d = 1)
    {
        QSeries s;
        s.ring_ = ring;
        s.d_ = d;
        s.exact_zero_ = true;
        s.v0_ = kInfiniteCap + 1;
        s.cap_ = kInfiniteCap;
        return s;
    }

    /// Series with coefficients for grid exponents v0, v0+1, ..., cap.
    /// Missing trailing coefficients are taken as zero.
    static QSeries from_coeffs(long v0, long cap, std::vector<R> coeffs, const Ring<R>& ring = {}, int d = 1)
    {
        if (d < 1)
            fail(ErrorCode::Precondition, "grid denominator must be positive");
        QSeries s;
        s.ring_ = ring;
        s.d_ = d;
        s.exact_zero_ = false;
        s.cap_ = cap;
        if (v0 > cap) {
            s.v0_ = cap + 1;
            return s;
        }
        s.v0_ = v0;
        // Trailing coefficients past the vector are zero; the vector never
        // extends past the cap.
        if (static_cast<long>(coeffs.size()) > cap - v0 + 1)
            coeffs.resize(static_cast<std::size_t>(cap - v0 + 1));
        s.c_ = std::move(coeffs);
        s.trim();
        return s;
    }

    static QSeries monomial(const R& c, long e, long cap, const Ring<R>& ring = {}, int d = 1)
    {
        if (is_zero(c))
            return exact_zero(ring, d);
        return from_coeffs(e, cap, std::vector<R>{c}, ring, d);
    }

    static QSeries one(long cap, const Ring<R>& ring = {}, int d = 1)
    {
        return monomial(ring.one(), 0, cap, ring, d);
    }

    int denom() const noexcept { return d_; }
    long v0() const noexcept { return v0_; }
    long cap() const noexcept { return cap_; }
    Rat v0_exp() const { return Rat(v0_, d_); }
    Rat cap_exp() const { return Rat(cap_, d_); }
    bool is_exact_zero() const noexcept { return exact_zero_; }
    /// True when no nonzero coefficient is retained (exact zero included).
    bool is_empty() const noexcept { return c_.empty(); }
    const Ring<R>& ring() const noexcept { return ring_; }
    const std::vector<R>& coeffs() const noexcept { return c_; }

    /// Grid exponent of the lowest nonzero coefficient, if any is retained.
    std::optional<long> valuation() const
    {
        if (c_.empty())
            return std::nullopt;
        return v0_;
    }

    /// Coefficient of q^(e/d). Zero below the window; error above the cap.
    R coeff(long e) const
    {
        if (exact_zero_ || e < v0_)
            return ring_.zero();
        if (e > cap_)
            fail(ErrorCode::Precondition, "coefficient requested above the series cap");
        if (e - v0_ >= static_cast<long>(c_.size()))
            return ring_.zero();
        return c_[static_cast<std::size_t>(e - v0_)];
    }

    const R& leading() const { return c_.front(); }

    QSeries truncate(long cap) const
    {
        if (exact_zero_ || cap >= cap_)
            return *this;
        QSeries s = *this;
        s.cap_ = cap;
        if (cap < v0_) {
            s.c_.clear();
            s.v0_ = cap + 1;
        } else if (static_cast<long>(s.c_.size()) > cap - v0_ + 1) {
            s.c_.resize(static_cast<std::size_t>(cap - v0_ + 1));
        }
        s.trim();
        return s;
    }

    /// Same series on a finer grid d2 (d must divide d2).
    QSeries rescale(int d2) const
    {
        if (d2 % d_ != 0)
            fail(ErrorCode::GridMismatch, "cannot rescale grid " + std::to_string(d_) + " to " + std::to_string(d2));
        const long f = d2 / d_;
        if (exact_zero_)
            return exact_zero(ring_, d2);
        QSeries s;
        s.ring_ = ring_;
        s.d_ = d2;
        s.exact_zero_ = false;
        s.cap_ = cap_ * f + (f - 1);
        if (c_.empty()) {
            s.v0_ = s.cap_ + 1;
            return s;
        }
        s.v0_ = v0_ * f;
        s.c_.assign((c_.size() - 1) * static_cast<std::size_t>(f) + 1, ring_.zero());
        for (std::size_t k = 0; k < c_.size(); ++k)
            s.c_[k * static_cast<std::size_t>(f)] = c_[k];
        return s;
    }

    /// Substitutes q -> q^m (exponents scale by m, grid unchanged).
    QSeries dilate(long m) const
    {
        if (m < 1)
            fail(ErrorCode::Precondition, "dilation factor must be positive");
        if (exact_zero_ || m == 1)
            return *this;
        QSeries s;
        s.ring_ = ring_;
        s.d_ = d_;
        s.exact_zero_ = false;
        s.cap_ = cap_ * m + (m - 1);
        if (c_.empty()) {
            s.v0_ = s.cap_ + 1;
            return s;
        }
        s.v0_ = v0_ * m;
        s.c_.assign((c_.size() - 1) * static_cast<std::size_t>(m) + 1, ring_.zero());
        for (std::size_t k = 0; k < c_.size(); ++k)
            s.c_[k * static_cast<std::size_t>(m)] = c_[k];
        return s;
    }

    std::string str() const;

    // Raw access for kernels that build series in place.
    std::vector<R>& mutable_coeffs() { return c_; }
    void set_window(long v0, long cap)
    {
        v0_ = v0;
        cap_ = cap;
    }
    void trim()
    {
        std::size_t k = 0;
        while (k < c_.size() && is_zero(c_[k]))
            ++k;
        if (k == c_.size()) {
            c_.clear();
            v0_ = cap_ + 1;
            return;
        }
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
            v0_ += static_cast<long>(k);
        }
    }

private:
    Ring<R> ring_{};
    int d_ = 1;
    long v0_ = kInfiniteCap + 1;
    long cap_ = kInfiniteCap;
    std::vector<R> c_;
    bool exact_zero_ = true;
};

using Series = QSeries<Rat>;
using PolySeries = QSeries<PolyCoeff>;

// ---------------------------------------------------------------------------
// In-place kernels on dense coefficient vectors (index k = exponent offset k).

namespace kernel {

template <class R>
inline void mul_binomial(std::vector<R>& c, const R& a, long s)
{
    // c *= (1 - a q^s), s > 0, truncated to c.size()
    const long n = static_cast<long>(c.size());
    for (long k = n - 1; k >= s; --k) {
        if (is_zero(c[static_cast<std::size_t>(k - s)]))
            continue;
        c[static_cast<std::size_t>(k)] -= a * c[static_cast<std::size_t>(k - s)];
    }
}

template <class R>
inline void div_binomial(std::vector<R>& c, const R& a, long s)
{
    // c /= (1 - a q^s), s > 0, truncated to c.size()
    const long n = static_cast<long>(c.size());
    for (long k = s; k < n; ++k) {
        if (is_zero(c[static_cast<std::size_t>(k - s)]))
            continue;
        c[static_cast<std::size_t>(k)] += a * c[static_cast<std::size_t>(k - s)];
    }
}

template <>
inline void mul_binomial<Rat>(std::vector<Rat>& c, const Rat& a, long s)
{
    const long n = static_cast<long>(c.size());
    const bool one = a.is_one(), minus_one = (a == Rat(-1));
    for (long k = n - 1; k >= s; --k) {
        const Rat& src = c[static_cast<std::size_t>(k - s)];
        if (src.is_zero())
            continue;
        Rat& dst = c[static_cast<std::size_t>(k)];
        if (one)
            dst -= src;
        else if (minus_one)
            dst += src;
        else
            dst -= a * src;
    }
}

template <>
inline void div_binomial<Rat>(std::vector<Rat>& c, const Rat& a, long s)
{
    const long n = static_cast<long>(c.size());
    const bool one = a.is_one(), minus_one = (a == Rat(-1));
    for (long k = s; k < n; ++k) {
        const Rat& src = c[static_cast<std::size_t>(k - s)];
        if (src.is_zero())
            continue;
        Rat& dst = c[static_cast<std::size_t>(k)];
        if (one)
            dst += src;
        else if (minus_one)
            dst -= src;
        else
            dst += a * src;
    }
}

} // namespace kernel

// ---------------------------------------------------------------------------
// Arithmetic.

template <class R>
void check_grid(const QSeries<R>& a, const QSeries<R>& b)
{
    if (a.denom() != b.denom())
        fail(ErrorCode::GridMismatch,
             "series grids differ (1/" + std::to_string(a.denom()) + " vs 1/" + std::to_string(b.denom()) + ")");
}

template <class R>
QSeries<R> qs_add(const QSeries<R>& a, const QSeries<R>& b)
{
    check_grid(a, b);
    if (a.is_exact_zero())
        return b;
    if (b.is_exact_zero())
        return a;
    const long cap = std::min(a.cap(), b.cap());
    const long v0 = std::min(a.v0(), b.v0());
    if (v0 > cap)
        return QSeries<R>::from_coeffs(cap + 1, cap, {}, a.ring(), a.denom());
    const long top = std::min(cap, std::max(a.v0() + static_cast<long>(a.coeffs().size()),
                                            b.v0() + static_cast<long>(b.coeffs().size())) - 1);
    std::vector<R> c(static_cast<std::size_t>(std::max(0L, top - v0 + 1)), a.ring().zero());
    for (const QSeries<R>* s : {&a, &b}) {
        const auto& sc = s->coeffs();
        for (std::size_t k = 0; k < sc.size(); ++k) {
            long e = s->v0() + static_cast<long>(k);
            if (e > cap)
                break;
            c[static_cast<std::size_t>(e - v0)] += sc[k];
        }
    }
    return QSeries<R>::from_coeffs(v0, cap, std::move(c), a.ring(), a.denom());
}

template <class R>
QSeries<R> qs_scale(const QSeries<R>& a, const R& s)
{
    if (a.is_exact_zero())
        return a;
    std::vector<R> c = a.coeffs();
    for (auto& x : c)
        x = x * s;
    return QSeries<R>::from_coeffs(a.v0(), a.cap(), std::move(c), a.ring(), a.denom());
}

template <class R>
QSeries<R> qs_neg(const QSeries<R>& a)
{
    return qs_scale(a, -a.ring().one());
}

template <class R>
QSeries<R> qs_sub(const QSeries<R>& a, const QSeries<R>& b)
{
    return qs_add(a, qs_neg(b));
}

/// Multiplies by the monomial c q^e (grid units); the cap shifts with it.
template <class R>
QSeries<R> qs_shift(const QSeries<R>& a, const R& c, long e)
{
    if (a.is_exact_zero())
        return a;
    if (is_zero(c))
        return QSeries<R>::exact_zero(a.ring(), a.denom());
    std::vector<R> v = a.coeffs();
    for (auto& x : v)
        x = x * c;
    if (v.empty())
        return QSeries<R>::from_coeffs(a.cap() + e + 1, a.cap() + e, {}, a.ring(), a.denom());
    return QSeries<R>::from_coeffs(a.v0() + e, a.cap() + e, std::move(v), a.ring(), a.denom());
}

template <class R>
QSeries<R> qs_mul(const QSeries<R>& a, const QSeries<R>& b)
{
    check_grid(a, b);
    if (a.is_exact_zero() || b.is_exact_zero())
        return QSeries<R>::exact_zero(a.ring(), a.denom());
    const long cap = std::min(a.cap() + b.v0(), b.cap() + a.v0());
    const long v0 = a.v0() + b.v0();
    if (a.is_empty() || b.is_empty() || v0 > cap)
        return QSeries<R>::from_coeffs(cap + 1, cap, {}, a.ring(), a.denom());
    const auto& ac = a.coeffs();
    const auto& bc = b.coeffs();
    const long len = std::min<long>(cap - v0 + 1, static_cast<long>(a.coeffs().size() + b.coeffs().size()) - 1);
    std::vector<R> c(static_cast<std::size_t>(len), a.ring().zero());
    const long la = std::min<long>(static_cast<long>(ac.size()), len);
    const long lb = std::min<long>(static_cast<long>(bc.size()), len);
    for (long i = 0; i < la; ++i) {
        if (is_zero(ac[static_cast<std::size_t>(i)]))
            continue;
        const long jmax = std::min(lb, len - i);
        for (long j = 0; j < jmax; ++j) {
            if (is_zero(bc[static_cast<std::size_t>(j)]))
                continue;
            c[static_cast<std::size_t>(i + j)] += ac[static_cast<std::size_t>(i)] * bc[static_cast<std::size_t>(j)];
        }
    }
    return QSeries<R>::from_coeffs(v0, cap, std::move(c), a.ring(), a.denom());
}

template <class R>
QSeries<R> qs_invert(const QSeries<R>& a)
{
    if (a.is_exact_zero())
        fail(ErrorCode::IndeterminateValuation, "cannot invert the exact zero series");
    if (a.is_empty())
        fail(ErrorCode::IndeterminateValuation,
             "every retained coefficient is zero up to q^" + a.cap_exp().str() + "; valuation unknown");
    const auto& ac = a.coeffs();
    if (!is_unit(ac[0]))
        fail(ErrorCode::NotAUnit, "leading coefficient " + to_string(ac[0]) + " is not invertible");
    const long v = a.v0();
    if (a.cap() >= kInfiniteCap / 2) {
        if (ac.size() == 1)
            return QSeries<R>::monomial(coeff_invert(ac[0]), -v, kInfiniteCap, a.ring(), a.denom());
        fail(ErrorCode::Precondition, "cannot invert a polynomial without a finite cap");
    }
    const long rel = a.cap() - v; // relative precision
    const long cap = a.cap() - 2 * v;
    const R inv0 = coeff_invert(ac[0]);
    std::vector<R> r(static_cast<std::size_t>(rel + 1), a.ring().zero());
    r[0] = inv0;
    for (long n = 1; n <= rel; ++n) {
        R acc = a.ring().zero();
        const long kmax = std::min<long>(n, static_cast<long>(ac.size()) - 1);
        for (long k = 1; k <= kmax; ++k) {
            if (is_zero(ac[static_cast<std::size_t>(k)]))
                continue;
            acc += ac[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(n - k)];
        }
        r[static_cast<std::size_t>(n)] = -(acc * inv0);
    }
    return QSeries<R>::from_coeffs(-v, cap, std::move(r), a.ring(), a.denom());
}

template <class R>
QSeries<R> qs_div(const QSeries<R>& a, const QSeries<R>& b)
{
    return qs_mul(a, qs_invert(b));
}

/// Highest exponent worth comparing: the common cap, or the last stored
/// coefficient when both caps are infinite.
template <class R>
long compare_top(const QSeries<R>& a, const QSeries<R>& b)
{
    long cap = std::min(a.cap(), b.cap());
    long stored = std::max(a.v0() + static_cast<long>(a.coeffs().size()),
                           b.v0() + static_cast<long>(b.coeffs().size())) - 1;
    return std::min(cap, stored);
}

/// Equality on the common window [min v0, min cap] (below v0 is zero).
template <class R>
bool qs_equal(const QSeries<R>& a, const QSeries<R>& b)
{
    check_grid(a, b);
    if (a.is_exact_zero() && b.is_exact_zero())
        return true;
    const long lo = std::min(a.v0(), b.v0());
    const long cap = compare_top(a, b);
    for (long e = lo; e <= cap; ++e)
        if (a.coeff(e) != b.coeff(e))
            return false;
    return true;
}

/// First exponent (grid units) in [min v0, min cap] where a and b differ.
template <class R>
std::optional<long> qs_first_difference(const QSeries<R>& a, const QSeries<R>& b)
{
    check_grid(a, b);
    if (a.is_exact_zero() && b.is_exact_zero())
        return std::nullopt;
    const long lo = std::min(a.v0(), b.v0());
    const long cap = compare_top(a, b);
    for (long e = lo; e <= cap; ++e)
        if (a.coeff(e) != b.coeff(e))
            return e;
    return std::nullopt;
}

/// Brings both series onto the grid lcm(d_a, d_b).
template <class R>
void unify_grids(QSeries<R>& a, QSeries<R>& b)
{
    if (a.denom() == b.denom())
        return;
    int d = std::lcm(a.denom(), b.denom());
    a = a.rescale(d);
    b = b.rescale(d);
}

// ---------------------------------------------------------------------------
// Pochhammer family. Caps are given as rational exponents N; the grid is
// the smallest one holding N and every base exponent unless d is given.

int grid_for(std::initializer_list<Rat> exps, int d = 1);
long to_grid(const Rat& e, int d);

template <class R>
QSeries<R> poch_fin(const QMon<R>& base, long n, const Rat& cap, const Ring<R>& ring = {}, long m = 1, int d = 0);

template <class R>
QSeries<R> poch_inf(const QMon<R>& base, const Rat& cap, const Ring<R>& ring = {}, long m = 1, int d = 0);

template <class R>
QSeries<R> inv_poch_q(long n, const Rat& cap, const Ring<R>& ring = {}, int d = 1);

QMon<Rat> tau_p_mon(long p, long n);

template <class R>
QSeries<R> qbinom(long n, long k, const Rat& cap, const Ring<R>& ring = {}, long m = 1, int d = 1);

/// (z, q^(p+1)/z, q^(p+1); q^(p+1))_inf
Series jtp_product(const QMon<Rat>& z, long p, const Rat& cap);

/// Binomial factor 1 - c q^s with s in grid units, as used by the product
/// builders below.
template <class R>
struct Binomial {
    R c;
    long s;
};

/// Multiplies (num) and divides (den) a list of binomials into a series
/// whose coefficients are exact up to grid exponent cap.
template <class R>
QSeries<R> binomial_product(const std::vector<Binomial<R>>& num, const std::vector<Binomial<R>>& den, long cap,
                            const Ring<R>& ring, int d);

extern template class QSeries<Rat>;
extern template class QSeries<PolyCoeff>;

} // namespace qverify
