#include <doctest.h>

#include <map>
#include <random>

#include "qverify/qseries.hpp"

using namespace qverify;

namespace {

Series poly(long v0, long cap, std::vector<Rat> c)
{
    return Series::from_coeffs(v0, cap, std::move(c));
}

std::vector<Rat> coeffs_from(const Series& s, long lo, long hi)
{
    std::vector<Rat> out;
    for (long e = lo; e <= hi; ++e)
        out.push_back(s.coeff(e));
    return out;
}

// Naive expansion of prod (1 - c q^s) over a list, used as an oracle.
std::map<long, Rat> naive_product(const std::vector<std::pair<Rat, long>>& factors, long cap)
{
    std::map<long, Rat> acc{{0, Rat(1)}};
    for (const auto& [c, s] : factors) {
        std::map<long, Rat> next;
        for (const auto& [e, v] : acc) {
            next[e] += v;
            if (e + s <= cap)
                next[e + s] -= c * v;
        }
        acc = std::move(next);
    }
    return acc;
}

Rat random_unit(std::mt19937_64& rng)
{
    static const Rat pool[] = {Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(3), Rat(1, 2), Rat(-2, 3), Rat(3, 5)};
    return pool[rng() % 8];
}

} // namespace

TEST_CASE("window rules")
{
    Series a = poly(0, 5, {1, 1});
    Series b = poly(0, 5, {1, -1});
    CHECK(qs_add(a, b).str() == "2 + O(q^6)");

    Series c = poly(2, 4, {1});
    Series sum = qs_add(poly(0, 5, {1}), c);
    CHECK(sum.cap() == 4);

    Series geo = poly(0, 6, {1, 1, 1, 1, 1, 1, 1});
    Series prod = qs_mul(poly(0, kInfiniteCap, {1, -1}), geo);
    CHECK(prod.cap() == 6);
    CHECK(prod.coeff(0) == 1);
    for (long e = 1; e <= 6; ++e)
        CHECK(prod.coeff(e) == 0);

    Series m = qs_mul(Series::monomial(2, -1, kInfiniteCap), Series::monomial(3, 4, kInfiniteCap));
    CHECK(m.v0() == 3);
    CHECK(m.leading() == 6);

    Series t = qs_mul(poly(0, 10, {1, -2}), poly(0, 10, {1, 0, -2}));
    CHECK(coeffs_from(t, 0, 4) == std::vector<Rat>{1, -2, -2, 4, 0});
}

TEST_CASE("inversion")
{
    Series inv = qs_invert(poly(0, 4, {1, -1}));
    CHECK(coeffs_from(inv, 0, 4) == std::vector<Rat>{1, 1, 1, 1, 1});

    Series q2 = qs_invert(Series::monomial(1, 2, 4));
    CHECK(q2.v0() == -2);
    CHECK(q2.cap() == 0);

    try {
        qs_invert(Series::exact_zero());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IndeterminateValuation);
    }
    try {
        qs_invert(Series::from_coeffs(6, 5, {}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IndeterminateValuation);
    }
}

TEST_CASE("pochhammer symbols")
{
    Series p = poch_fin(QMon<Rat>{2, 0}, 3, 10);
    CHECK(coeffs_from(p, 0, 4) == std::vector<Rat>{-1, 2, 2, -4, 0});

    Series neg = poch_fin(QMon<Rat>{1, 2}, -1, 5);
    CHECK(coeffs_from(neg, 0, 5) == std::vector<Rat>{1, 1, 1, 1, 1, 1});

    try {
        poch_fin(QMon<Rat>{1, 1}, -1, 5);
        FAIL("expected a pole");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Pole);
    }

    Series euler = poch_inf(QMon<Rat>{1, 1}, 5);
    CHECK(euler.str() == "1 - q - q^2 + q^5 + O(q^6)");
    CHECK(poch_inf(QMon<Rat>{1, 0}, 5).is_exact_zero());
    CHECK_THROWS_AS(poch_inf(QMon<Rat>{1, -1}, 5), Error);

    // Euler pentagonal oracle: (q;q)_inf = sum (-1)^k q^{k(3k-1)/2}, k in Z.
    Series e30 = poch_inf(QMon<Rat>{1, 1}, 60);
    std::map<long, Rat> pent;
    for (long k = -10; k <= 10; ++k) {
        long ex = k * (3 * k - 1) / 2;
        if (ex <= 60)
            pent[ex] += Rat(k % 2 == 0 ? 1 : -1);
    }
    for (long e = 0; e <= 60; ++e)
        CHECK(e30.coeff(e) == (pent.count(e) ? pent[e] : Rat(0)));
}

TEST_CASE("inverse (q;q)_n and q-binomials")
{
    // Oracle: partitions into parts <= 2.
    Series s = inv_poch_q<Rat>(2, 12);
    for (long e = 0; e <= 12; ++e)
        CHECK(s.coeff(e) == Rat(e / 2 + 1));
    CHECK(inv_poch_q<Rat>(0, 5).str() == "1 + O(q^6)");
    CHECK(inv_poch_q<Rat>(-3, 5).is_exact_zero());

    Series b = qbinom<Rat>(4, 2, 10);
    CHECK(b.str() == "1 + q + 2*q^2 + q^3 + q^4 + O(q^11)");
    CHECK(qbinom<Rat>(5, 0, 10).str() == "1 + O(q^11)");
    CHECK(qbinom<Rat>(2, 3, 10).is_exact_zero());

    CHECK(tau_p_mon(1, 3).c == -1);
    CHECK(tau_p_mon(1, 3).e == 3);
    CHECK(tau_p_mon(1, 0).e == 0);
    CHECK(tau_p_mon(2, -1).c == -1);
    CHECK(tau_p_mon(2, -1).e == 2);
}

TEST_CASE("finite products against a naive oracle")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Rat c = random_unit(rng);
        long e = static_cast<long>(rng() % 4);
        long n = static_cast<long>(rng() % 7);
        std::vector<std::pair<Rat, long>> f;
        for (long k = 0; k < n; ++k)
            f.push_back({c, e + k});
        auto oracle = naive_product(f, 15);
        Series s = poch_fin(QMon<Rat>{c, Rat(e)}, n, 15);
        for (long x = 0; x <= 15; ++x)
            CHECK(s.coeff(x) == (oracle.count(x) ? oracle[x] : Rat(0)));
    }
}

TEST_CASE("jacobi triple product on the bilateral sum")
{
    for (long p : {1L, 2L, 4L}) {
        for (long ze : {1L, 2L}) {
            if (ze > p)
                continue;
            const long N = 40;
            Series prod = jtp_product(QMon<Rat>{1, Rat(ze)}, p, N);
            std::map<long, Rat> bil;
            for (long n = -20; n <= 20; ++n) {
                QMon<Rat> t = tau_p_mon(p + 1, n);
                long ex = t.e.floor() + ze * n;
                if (ex <= N)
                    bil[ex] += t.c;
            }
            for (long x = 0; x <= N; ++x)
                CHECK(prod.coeff(x) == (bil.count(x) ? bil[x] : Rat(0)));
        }
    }
}

TEST_CASE("polynomial-mode series")
{
    Ring<PolyCoeff> ring{3};
    PolyCoeff u = ring.u_power(1, 1);
    // (u q; q)_inf has u-coefficient -q/(1-q) = -(q + q^2 + ...)
    PolySeries s = poch_inf(QMon<PolyCoeff>{u, 1}, 6, ring);
    for (long e = 1; e <= 6; ++e)
        CHECK(s.coeff(e)[1] == Rat(-1));
    CHECK(s.coeff(0).is_one());
}
