#include "qverify/qseries.hpp"

namespace qverify {

namespace {

std::string exponent_text(long g, int d)
{
    Rat e(g, d);
    if (e.is_integer())
        return e.str();
    return "(" + e.str() + ")";
}

std::string power_of_q(long g, int d)
{
    if (g == 0)
        return "";
    if (g == d)
        return "q";
    return "q^" + exponent_text(g, d);
}

// Returns (sign, body) so the caller can join terms with " + " / " - ".
std::pair<bool, std::string> term_text(const Rat& c, long g, int d)
{
    bool neg = c.sign() < 0;
    Rat a = c.abs();
    std::string q = power_of_q(g, d);
    if (q.empty())
        return {neg, a.str()};
    if (a.is_one())
        return {neg, q};
    return {neg, a.str() + "*" + q};
}

std::pair<bool, std::string> term_text(const PolyCoeff& c, long g, int d)
{
    std::string q = power_of_q(g, d);
    std::string body = c.str();
    bool compound =
        std::count_if(c.coeffs().begin(), c.coeffs().end(), [](const Rat& r) { return !r.is_zero(); }) > 1;
    if (q.empty())
        return {false, compound ? "(" + body + ")" : body};
    if (c.is_one())
        return {false, q};
    return {false, (compound ? "(" + body + ")" : body) + "*" + q};
}

} // namespace

template <class R>
std::string QSeries<R>::str() const
{
    if (exact_zero_)
        return "0 (exact)";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (is_zero(c_[k]))
            continue;
        auto [neg, body] = term_text(c_[k], v0_ + static_cast<long>(k), d_);
        if (out.empty())
            out = neg ? "-" + body : body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    std::string big_o = "O(q^" + exponent_text(cap_ + 1, d_) + ")";
    return out.empty() ? big_o : out + " + " + big_o;
}

template class QSeries<Rat>;
template class QSeries<PolyCoeff>;

int grid_for(std::initializer_list<Rat> exps, int d)
{
    long g = d;
    for (const Rat& e : exps) {
        long den = e.den().get_si();
        g = std::lcm(g, den);
    }
    return static_cast<int>(g);
}

long to_grid(const Rat& e, int d)
{
    Rat g = e * Rat(d);
    if (!g.is_integer())
        fail(ErrorCode::GridMismatch, "exponent " + e.str() + " is not on the grid 1/" + std::to_string(d));
    return g.num().get_si();
}

template <class R>
QSeries<R> binomial_product(const std::vector<Binomial<R>>& num, const std::vector<Binomial<R>>& den, long cap,
                            const Ring<R>& ring, int d)
{
    long shift = 0;
    for (const auto& b : num) {
        if (is_zero(b.c))
            continue;
        if (b.s == 0 && is_one(b.c))
            return QSeries<R>::exact_zero(ring, d);
        if (b.s < 0)
            shift += b.s;
    }
    for (const auto& b : den) {
        if (is_zero(b.c))
            continue;
        if (b.s == 0 && is_one(b.c))
            fail(ErrorCode::Pole, "denominator factor (1 - q^0) vanishes");
        if (b.s < 0)
            shift -= b.s;
    }
    const long len = cap - shift + 1;
    if (len <= 0)
        return QSeries<R>::from_coeffs(cap + 1, cap, {}, ring, d);
    std::vector<R> w(static_cast<std::size_t>(len), ring.zero());
    w[0] = ring.one();
    R scale = ring.one();
    for (const auto& b : num) {
        if (is_zero(b.c))
            continue;
        if (b.s > 0) {
            if (b.s < len)
                kernel::mul_binomial(w, b.c, b.s);
        } else if (b.s == 0) {
            scale = scale * (ring.one() - b.c);
        } else {
            // 1 - c q^s = q^s (q^t - c), t = -s
            const long t = -b.s;
            const R alpha = -b.c;
            for (long k = len - 1; k >= 0; --k) {
                R v = alpha * w[static_cast<std::size_t>(k)];
                if (k >= t)
                    v += w[static_cast<std::size_t>(k - t)];
                w[static_cast<std::size_t>(k)] = std::move(v);
            }
        }
    }
    for (const auto& b : den) {
        if (is_zero(b.c))
            continue;
        if (b.s > 0) {
            if (b.s < len)
                kernel::div_binomial(w, b.c, b.s);
        } else if (b.s == 0) {
            R f = ring.one() - b.c;
            if (!is_unit(f))
                fail(ErrorCode::NotAUnit, "denominator factor " + to_string(f) + " is not invertible");
            scale = scale * coeff_invert(f);
        } else {
            const long t = -b.s;
            if (!is_unit(b.c))
                fail(ErrorCode::NotAUnit, "denominator factor with non-invertible leading coefficient");
            const R inv = coeff_invert(-b.c);
            for (long k = 0; k < len; ++k) {
                R v = w[static_cast<std::size_t>(k)];
                if (k >= t)
                    v -= w[static_cast<std::size_t>(k - t)];
                w[static_cast<std::size_t>(k)] = v * inv;
            }
        }
    }
    if (!is_one(scale))
        for (auto& x : w)
            x = x * scale;
    return QSeries<R>::from_coeffs(shift, cap, std::move(w), ring, d);
}

template <class R>
QSeries<R> poch_fin(const QMon<R>& base, long n, const Rat& cap, const Ring<R>& ring, long m, int d)
{
    if (d == 0)
        d = grid_for({base.e, cap});
    if (m < 1)
        fail(ErrorCode::Precondition, "base power must be positive");
    const long e = to_grid(base.e, d);
    const long step = m * d;
    const long N = to_grid(cap, d);
    std::vector<Binomial<R>> num, den;
    if (n >= 0) {
        for (long k = 0; k < n; ++k)
            num.push_back({base.c, e + step * k});
    } else {
        for (long k = 1; k <= -n; ++k) {
            long s = e - step * k;
            if (s == 0 && is_one(base.c))
                fail(ErrorCode::Pole, "(a;q)_n with n = " + std::to_string(n) + " has a vanishing denominator factor");
            den.push_back({base.c, s});
        }
    }
    return binomial_product(num, den, N, ring, d);
}

template <class R>
QSeries<R> poch_inf(const QMon<R>& base, const Rat& cap, const Ring<R>& ring, long m, int d)
{
    if (d == 0)
        d = grid_for({base.e, cap});
    if (base.e.sign() < 0)
        fail(ErrorCode::Divergent, "infinite product with base exponent " + base.e.str() + " < 0");
    if (is_zero(base.c))
        return QSeries<R>::one(to_grid(cap, d), ring, d);
    const long e = to_grid(base.e, d);
    const long N = to_grid(cap, d);
    if (e == 0 && is_one(base.c))
        return QSeries<R>::exact_zero(ring, d);
    std::vector<Binomial<R>> num;
    for (long k = 0; e + m * d * k <= N; ++k)
        num.push_back({base.c, e + m * d * k});
    return binomial_product(num, {}, N, ring, d);
}

template <class R>
QSeries<R> inv_poch_q(long n, const Rat& cap, const Ring<R>& ring, int d)
{
    if (n < 0)
        return QSeries<R>::exact_zero(ring, d);
    const long N = to_grid(cap, d);
    std::vector<Binomial<R>> den;
    for (long k = 1; k <= n && k * d <= N; ++k)
        den.push_back({ring.one(), k * d});
    return binomial_product({}, den, N, ring, d);
}

QMon<Rat> tau_p_mon(long p, long n)
{
    return {Rat(n % 2 == 0 ? 1 : -1), Rat(p * n * (n - 1) / 2)};
}

template <class R>
QSeries<R> qbinom(long n, long k, const Rat& cap, const Ring<R>& ring, long m, int d)
{
    if (k < 0 || k > n)
        return QSeries<R>::exact_zero(ring, d);
    const long N = to_grid(cap, d);
    const long step = m * d;
    std::vector<Binomial<R>> num, den;
    for (long i = 1; i <= k; ++i) {
        num.push_back({ring.one(), step * (n - k + i)});
        den.push_back({ring.one(), step * i});
    }
    return binomial_product(num, den, N, ring, d);
}

Series jtp_product(const QMon<Rat>& z, long p, const Rat& cap)
{
    const long m = p + 1;
    const int d = grid_for({z.e, cap});
    Ring<Rat> ring;
    Series a = poch_inf(z, cap, ring, m, d);
    Series b = poch_inf(QMon<Rat>{z.c.inverse(), Rat(m) - z.e}, cap, ring, m, d);
    Series c = poch_inf(QMon<Rat>{Rat(1), Rat(m)}, cap, ring, m, d);
    return qs_mul(qs_mul(a, b), c);
}

template QSeries<Rat> binomial_product(const std::vector<Binomial<Rat>>&, const std::vector<Binomial<Rat>>&, long,
                                       const Ring<Rat>&, int);
template QSeries<PolyCoeff> binomial_product(const std::vector<Binomial<PolyCoeff>>&,
                                             const std::vector<Binomial<PolyCoeff>>&, long, const Ring<PolyCoeff>&,
                                             int);
template QSeries<Rat> poch_fin(const QMon<Rat>&, long, const Rat&, const Ring<Rat>&, long, int);
template QSeries<PolyCoeff> poch_fin(const QMon<PolyCoeff>&, long, const Rat&, const Ring<PolyCoeff>&, long, int);
template QSeries<Rat> poch_inf(const QMon<Rat>&, const Rat&, const Ring<Rat>&, long, int);
template QSeries<PolyCoeff> poch_inf(const QMon<PolyCoeff>&, const Rat&, const Ring<PolyCoeff>&, long, int);
template QSeries<Rat> inv_poch_q(long, const Rat&, const Ring<Rat>&, int);
template QSeries<PolyCoeff> inv_poch_q(long, const Rat&, const Ring<PolyCoeff>&, int);
template QSeries<Rat> qbinom(long, long, const Rat&, const Ring<Rat>&, long, int);
template QSeries<PolyCoeff> qbinom(long, long, const Rat&, const Ring<PolyCoeff>&, long, int);

} // namespace qverify
