#pragma once

// Randomized checks shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qverify/hyper.hpp"
#include "qverify/verify.hpp"

namespace qverify::checks {

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what)
    {
        ++cases;
        if (!ok && failures++ == 0)
            first_failure = what;
    }
};

inline Rat pick_unit(std::mt19937_64& rng)
{
    static const Rat pool[] = {Rat(1),    Rat(-1),   Rat(2),    Rat(-2),   Rat(3),  Rat(1, 2),
                               Rat(-1, 2), Rat(2, 3), Rat(-3, 4), Rat(5, 7), Rat(7, 3), Rat(-4, 5)};
    return pool[rng() % std::size(pool)];
}

inline long pick(std::mt19937_64& rng, long lo, long hi)
{
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

inline Series mono(const Rat& c, long e)
{
    return Series::monomial(c, e, kInfiniteCap);
}

// 1 - c q^s as an exact polynomial.
inline Series binom1(const Rat& c, long s)
{
    return qs_sub(Series::one(kInfiniteCap), mono(c, s));
}

inline std::string mon_text(const Rat& c, long e)
{
    return c.str() + "*q^" + std::to_string(e);
}

// (a;q)_{n+1} = (a;q)_n (1 - a q^n), n in [-8, 8].
inline SuiteResult poch_recurrence(std::mt19937_64& rng, int target = 250)
{
    SuiteResult r{"pochhammer recurrence"};
    while (r.cases < target) {
        Rat c = pick_unit(rng);
        long e = pick(rng, -4, 4), n = pick(rng, -8, 8);
        Rat cap(pick(rng, 6, 20));
        try {
            Series lhs = poch_fin(QMon<Rat>{c, Rat(e)}, n + 1, cap, {}, 1, 1);
            Series rhs = qs_mul(poch_fin(QMon<Rat>{c, Rat(e)}, n, cap, {}, 1, 1), binom1(c, e + n));
            r.record(qs_equal(lhs, rhs), "a=" + mon_text(c, e) + " n=" + std::to_string(n));
        } catch (const Error& err) {
            if (err.code() != ErrorCode::Pole)
                throw;
        }
    }
    return r;
}

// (a;q)_{m+n} = (a;q)_m (a q^m;q)_n, m, n in [-5, 5].
inline SuiteResult poch_splitting(std::mt19937_64& rng, int target = 250)
{
    SuiteResult r{"pochhammer splitting"};
    while (r.cases < target) {
        Rat c = pick_unit(rng);
        long e = pick(rng, -4, 4), m = pick(rng, -5, 5), n = pick(rng, -5, 5);
        Rat cap(pick(rng, 6, 20));
        try {
            Series lhs = poch_fin(QMon<Rat>{c, Rat(e)}, m + n, cap, {}, 1, 1);
            Series rhs = qs_mul(poch_fin(QMon<Rat>{c, Rat(e)}, m, cap, {}, 1, 1),
                                poch_fin(QMon<Rat>{c, Rat(e + m)}, n, cap, {}, 1, 1));
            r.record(qs_equal(lhs, rhs),
                     "a=" + mon_text(c, e) + " m=" + std::to_string(m) + " n=" + std::to_string(n));
        } catch (const Error& err) {
            if (err.code() != ErrorCode::Pole)
                throw;
        }
    }
    return r;
}

// tau_p(m+n) = tau_p(m) tau_p(n) q^(p m n). Exhaustive for p = 1 on
// [-10, 10]^2, random p up to 4 after that.
inline SuiteResult tau_addition(std::mt19937_64& rng, int target = 250)
{
    SuiteResult r{"tau addition"};
    auto one = [&](long p, long m, long n) {
        auto s = tau_p_mon(p, m + n), a = tau_p_mon(p, m), b = tau_p_mon(p, n);
        bool ok = s.c == a.c * b.c && s.e == a.e + b.e + Rat(p * m * n);
        // direct formula as a second oracle
        long k = m + n;
        ok = ok && s.e == Rat(p * k * (k - 1), 2) && s.c == Rat(k % 2 == 0 ? 1 : -1);
        r.record(ok, "p=" + std::to_string(p) + " m=" + std::to_string(m) + " n=" + std::to_string(n));
    };
    for (long m = -10; m <= 10; ++m)
        for (long n = -10; n <= 10; ++n)
            one(1, m, n);
    while (r.cases < 441 + target)
        one(pick(rng, 1, 4), pick(rng, -10, 10), pick(rng, -10, 10));
    return r;
}

// [n k]_{q^m} tau_m(k) = (q^(-mn);q^m)_k / (q^m;q^m)_k q^(mnk), 0 <= k <= n <= 8.
// m = 1 is the plain relation; m up to 5 gives the randomized bulk.
inline SuiteResult qbinom_tau(std::mt19937_64& rng)
{
    SuiteResult r{"q-binomial times tau"};
    for (long m = 1; m <= 5; ++m)
        for (long n = 0; n <= 8; ++n)
            for (long k = 0; k <= n; ++k) {
                Rat cap(pick(rng, 4, 30));
                auto t = tau_p_mon(m, k);
                Series lhs = qs_mul(qbinom<Rat>(n, k, cap, {}, m, 1), mono(t.c, t.e.floor()));
                Series num = poch_fin(QMon<Rat>{Rat(1), Rat(-m * n)}, k, cap + Rat(m * n * k), {}, m, 1);
                Series den = poch_fin(QMon<Rat>{Rat(1), Rat(m)}, k, cap + Rat(m * n * k), {}, m, 1);
                Series rhs = qs_mul(qs_div(num, den), mono(Rat(1), m * n * k));
                r.record(qs_equal(lhs, rhs) && lhs.cap() >= cap.floor() && rhs.cap() >= cap.floor(),
                         "m=" + std::to_string(m) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
            }
    return r;
}

// (q/b;q)_{i-j} (b q^(-i);q)_j = b^j tau(j) q^(-ij) (q/b;q)_i, 0 <= j <= i <= 6.
inline SuiteResult shifted_poch(std::mt19937_64& rng, int target = 250)
{
    SuiteResult r{"shifted pochhammer relation"};
    while (r.cases < target) {
        Rat c = pick_unit(rng);
        long e = pick(rng, -3, 3), i = pick(rng, 0, 6), j = pick(rng, 0, i);
        Rat cap(pick(rng, 5, 25));
        QMon<Rat> qb{c.inverse(), Rat(1 - e)};
        Series lhs = qs_mul(poch_fin(qb, i - j, cap + Rat(40), {}, 1, 1),
                            poch_fin(QMon<Rat>{c, Rat(e - i)}, j, cap + Rat(40), {}, 1, 1));
        auto t = tau_p_mon(1, j);
        Series rhs = qs_mul(mono(c.pow(j) * t.c, e * j + t.e.floor() - i * j), poch_fin(qb, i, cap + Rat(40), {}, 1, 1));
        r.record(qs_equal(lhs, rhs), "b=" + mon_text(c, e) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
    }
    return r;
}

// a * a^(-1) = 1 on the window for random invertible truncated series.
inline SuiteResult mul_invert(std::mt19937_64& rng, int target = 250)
{
    SuiteResult r{"series times its inverse"};
    while (r.cases < target) {
        long v0 = pick(rng, -4, 4), len = pick(rng, 1, 12);
        long cap = v0 + len - 1 + pick(rng, 0, 6);
        std::vector<Rat> c;
        for (long k = 0; k < len; ++k)
            c.push_back(k == 0 ? pick_unit(rng) : rng() % 3 == 0 ? Rat(0) : pick_unit(rng));
        Series a = Series::from_coeffs(v0, cap, c);
        Series p = qs_mul(a, qs_invert(a));
        bool ok = p.cap() == cap - v0;
        for (long e = std::min(0L, p.v0()); ok && e <= p.cap(); ++e)
            ok = p.coeff(e) == Rat(e == 0 ? 1 : 0);
        r.record(ok, a.str());
    }
    return r;
}

inline std::vector<SuiteResult> property_suites(unsigned long seed)
{
    std::mt19937_64 rng(seed);
    return {poch_recurrence(rng), poch_splitting(rng), tau_addition(rng), qbinom_tau(rng), shifted_poch(rng),
            mul_invert(rng)};
}

// ------------------------------------------------------------- soundness

struct SoundnessResult {
    std::string id;
    long samples = 0;
    long violations = 0;
    bool stable = true;
    std::string detail;
};

// Lattice sums reachable without a formal variable: Sum nodes, plus phi and
// Nahm nodes written out as sums. Bodies under tcoeff are skipped.
inline void collect_sums(const ExprPtr& e, std::vector<ExprPtr>& out)
{
    switch (e->kind) {
    case Kind::Sum:
        out.push_back(e);
        return;
    case Kind::Phi:
        out.push_back(phi_as_sum(*e, "w9"));
        return;
    case Kind::Nahm:
        out.push_back(nahm_as_sum(NahmSpec{e->A, e->B, e->C}, "w9"));
        return;
    case Kind::TCoeff:
        return;
    default:
        for (const auto& k : e->kids)
            collect_sums(k, out);
    }
}

struct ConeProbe {
    SummandProbe probe;
    Cone cone;
};

// Points y of the cone with bound(y) <= hi reachable from 0 by unit steps,
// together with the first point past hi along each step (the boundary).
inline std::vector<std::vector<long>> cone_points(const Cone& c, const Rat& hi, std::size_t limit)
{
    const std::size_t r = c.rank();
    std::vector<std::vector<long>> out, queue{std::vector<long>(r, 0)};
    std::set<std::vector<long>> seen{queue.front()};
    for (std::size_t head = 0; head < queue.size() && out.size() < limit; ++head) {
        auto y = queue[head];
        out.push_back(y);
        if (c.bound.eval(y) > hi)
            continue;
        for (std::size_t a = 0; a < r; ++a) {
            auto z = y;
            ++z[a];
            if (seen.insert(z).second)
                queue.push_back(z);
        }
    }
    return out;
}

// Samples at least min_samples lattice points of the entry's summands (one
// admissible env per instance, seed 42) and checks that the exact valuation
// never falls below the static bound. Also re-expands both sides at N + 5
// and checks that no retained coefficient moves.
inline SoundnessResult soundness(const IdentityRecord& rec, long min_samples = 1000, const Rat& N = Rat(30))
{
    SoundnessResult res{rec.id};
    std::vector<ConeProbe> pairs;
    auto insts = rec.instances();
    for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        auto rng = trial_rng(42, rec.id, i, 0);
        auto [env, cmp] = sample_and_compare(inst, N, rng);
        auto wide = compare_sides(inst.lhs, inst.rhs, env, N + Rat(5), inst.opts);
        if (!qs_equal(cmp.lhs, wide.lhs) || !qs_equal(cmp.rhs, wide.rhs) || wide.lhs.cap() < cmp.lhs.cap() ||
            wide.rhs.cap() < cmp.rhs.cap()) {
            res.stable = false;
            res.detail = "coefficients moved between caps at " + env.str();
        }
        std::vector<ExprPtr> sums;
        collect_sums(inst.lhs, sums);
        collect_sums(inst.rhs, sums);
        for (const auto& s : sums)
            for (auto& p : probe_summands(s, env, 0, inst.opts))
                for (auto& c : val_lower_bound(p.shape).cones)
                    pairs.push_back({p, c});
    }
    if (pairs.empty())
        return res;
    const std::size_t quota = (min_samples + pairs.size() - 1) / pairs.size() + 1;
    std::mt19937_64 rng(0x5eed);
    for (const auto& [p, c] : pairs) {
        const long d = p.grid;
        const Rat hi = N * Rat(d) + Rat(5 * d);
        auto pts = cone_points(c, hi, 4000);
        std::shuffle(pts.begin(), pts.end(), rng);
        if (pts.size() > quota)
            pts.resize(quota);
        // pad with scattered points when the domain is small
        long box = 2;
        for (const auto& y : pts)
            for (long v : y)
                box = std::max(box, v + 3);
        while (pts.size() < quota) {
            std::vector<long> y(c.rank());
            for (auto& v : y)
                v = pick(rng, 0, box);
            pts.push_back(y);
        }
        for (const auto& y : pts) {
            auto x = c.point(y);
            Rat bound = c.bound.eval(y);
            // anything below the bound shows up by exponent ceil(bound)
            const long cap = std::min((hi + Rat(10 * d)).floor(), std::max(0L, bound.ceil()) + d);
            Series s = p.value(x, cap);
            ++res.samples;
            if (!s.is_empty() && Rat(*s.valuation()) < bound) {
                if (res.violations++ == 0) {
                    std::string at;
                    for (long v : x)
                        at += (at.empty() ? "" : ",") + std::to_string(v);
                    res.detail = "valuation " + std::to_string(*s.valuation()) + " below bound " + bound.str() +
                                 " at (" + at + ")";
                }
            }
        }
    }
    return res;
}

} // namespace qverify::checks
