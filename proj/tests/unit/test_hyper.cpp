#include <doctest.h>

#include <map>

#include "qverify/hyper.hpp"

using namespace qverify;

namespace {

// Partitions of n with parts differing by at least 2, smallest part >= lo.
long gap_partitions(long n, long lo)
{
    if (n == 0)
        return 1;
    long c = 0;
    for (long p = lo; p <= n; ++p)
        c += gap_partitions(n - p, p + 2);
    return c;
}

// 1 / (q;q)_n as a plain coefficient vector, by counting partitions into
// parts <= n.
std::vector<long> inv_qq(long n, long cap)
{
    std::vector<long> c(static_cast<std::size_t>(cap + 1), 0);
    c[0] = 1;
    for (long part = 1; part <= n; ++part)
        for (long e = part; e <= cap; ++e)
            c[static_cast<std::size_t>(e)] += c[static_cast<std::size_t>(e - part)];
    return c;
}

SubstEnv env_of(std::map<std::string, ParamValue> v)
{
    SubstEnv e;
    e.values = std::move(v);
    return e;
}

} // namespace

TEST_CASE("nahm: rank one against gap partitions")
{
    Series f = nahm_eval(NahmSpec{{{Rat(2)}}, {Rat(0)}, Rat(0)}, Rat(40));
    Series g = nahm_eval(NahmSpec{{{Rat(2)}}, {Rat(1)}, Rat(0)}, Rat(40));
    for (long e = 0; e <= 40; ++e) {
        CHECK(f.coeff(e) == Rat(gap_partitions(e, 1)));
        CHECK(g.coeff(e) == Rat(gap_partitions(e, 2)));
    }
}

TEST_CASE("nahm: rank two against a direct double sum")
{
    // A = [[2,1],[1,2]], B = 0, C = 0
    const long cap = 25;
    std::vector<long> acc(cap + 1, 0);
    for (long a = 0; a * a <= cap; ++a)
        for (long b = 0; a * a + a * b + b * b <= cap; ++b) {
            long sh = a * a + a * b + b * b;
            auto ia = inv_qq(a, cap), ib = inv_qq(b, cap);
            for (long x = 0; x + sh <= cap; ++x)
                for (long y = 0; x + y + sh <= cap; ++y)
                    acc[static_cast<std::size_t>(x + y + sh)] += ia[static_cast<std::size_t>(x)] * ib[static_cast<std::size_t>(y)];
        }
    Series s = nahm_eval(NahmSpec{{{Rat(2), Rat(1)}, {Rat(1), Rat(2)}}, {Rat(0), Rat(0)}, Rat(0)}, Rat(cap));
    for (long e = 0; e <= cap; ++e)
        CHECK(s.coeff(e) == Rat(acc[static_cast<std::size_t>(e)]));

    // the explicit sum form evaluates to the same series
    Series t = eval(nahm_as_sum(NahmSpec{{{Rat(2), Rat(1)}, {Rat(1), Rat(2)}}, {Rat(0), Rat(0)}, Rat(0)}, "n"),
                    SubstEnv{}, Rat(cap));
    CHECK(qs_equal(s, t));
}

TEST_CASE("nahm: fractional exponents land on a finer grid")
{
    Series s = nahm_eval(NahmSpec{{{Rat(1)}}, {Rat(1, 2)}, Rat(-1, 40)}, Rat(6));
    CHECK(s.denom() % 40 == 0);
    CHECK(s.v0_exp() == Rat(-1, 40));
}

TEST_CASE("positive definiteness")
{
    CHECK_NOTHROW(check_positive_definite({{Rat(2), Rat(1)}, {Rat(1), Rat(2)}}));
    CHECK_NOTHROW(check_positive_definite({{Rat(4), Rat(2)}, {Rat(2), Rat(2)}}));
    for (auto bad : std::vector<std::vector<std::vector<Rat>>>{
             {{Rat(1), Rat(2)}, {Rat(2), Rat(1)}},
             {{Rat(2), Rat(1)}, {Rat(0), Rat(2)}},
             {{Rat(0)}},
             {{Rat(1), Rat(0)}}}) {
        try {
            check_positive_definite(bad);
            FAIL("accepted a bad matrix");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotPositiveDefinite);
        }
    }
    CHECK_THROWS_AS(nahm_eval(NahmSpec{{{Rat(-1)}}, {Rat(0)}, Rat(0)}, Rat(5)), Error);
}

TEST_CASE("phi: q-Gauss sum against its product")
{
    // 2phi1(a, b; c; q, c/(ab)) = (c/a, c/b; q)_inf / (c, c/(ab); q)_inf
    SubstEnv env = env_of({{"a", {Rat(2), 1}}, {"b", {Rat(-1, 2), 1}}, {"c", {Rat(3), 3}}});
    PhiSpec spec;
    spec.upper = {ParamMon::param("a"), ParamMon::param("b")};
    spec.lower = {ParamMon::param("c")};
    spec.arg = ParamMon::param("c") * ParamMon::param("a", -1) * ParamMon::param("b", -1);
    Series lhs = phi_eval(spec, env, Rat(20));
    Rat cap(24);
    Series rhs = qs_div(qs_mul(poch_inf(QMon<Rat>{Rat(3, 2), Rat(2)}, cap), poch_inf(QMon<Rat>{Rat(-6), Rat(2)}, cap)),
                        qs_mul(poch_inf(QMon<Rat>{Rat(3), Rat(3)}, cap), poch_inf(QMon<Rat>{Rat(-3), Rat(1)}, cap)));
    CHECK(lhs.cap() == 20);
    CHECK(qs_equal(lhs, rhs));

    Series as_sum = eval(phi_as_sum(spec, "k"), env, Rat(20));
    CHECK(qs_equal(lhs, as_sum));
}

TEST_CASE("phi: q-binomial theorem, balancing factor and base")
{
    // 1phi0(a;;q,z) = (az;q)_inf / (z;q)_inf
    SubstEnv env = env_of({{"a", {Rat(2, 3), 0}}, {"z", {Rat(-2), 1}}});
    PhiSpec spec;
    spec.upper = {ParamMon::param("a")};
    spec.arg = ParamMon::param("z");
    Series lhs = phi_eval(spec, env, Rat(15));
    Series rhs = qs_div(poch_inf(QMon<Rat>{Rat(-4, 3), Rat(1)}, Rat(15)), poch_inf(QMon<Rat>{Rat(-2), Rat(1)}, Rat(15)));
    CHECK(qs_equal(lhs, rhs));

    // 0phi1(;0;q,z) has tau(n)^2 and no upper parameters. Oracle: the
    // explicit sum of q^(n(n-1)) z^n / (q;q)_n.
    PhiSpec zero;
    zero.lower = {ParamMon::constant(Rat(0))};
    zero.arg = ParamMon::param("z");
    Series p = phi_eval(zero, env, Rat(15));
    Series want = eval(parse("sum(n>=0) q^(n*(n-1))*z^(n)/poch(q;n)"), env, Rat(15));
    CHECK(qs_equal(p, want));

    // base q^2: 1phi0(a;;q^2,z) = (az;q^2)_inf / (z;q^2)_inf
    spec.m = 2;
    Series l2 = phi_eval(spec, env, Rat(15));
    Series r2 = qs_div(poch_inf(QMon<Rat>{Rat(-4, 3), Rat(1)}, Rat(15), {}, 2),
                       poch_inf(QMon<Rat>{Rat(-2), Rat(1)}, Rat(15), {}, 2));
    CHECK(qs_equal(l2, r2));
}

TEST_CASE("phi: terminating series is exact")
{
    // 2phi1(q^-3, b; c; q, q) = (c/b;q)_3 / (c;q)_3 b^3, the q-Chu-Vandermonde sum
    SubstEnv env = env_of({{"b", {Rat(2), 0}}, {"c", {Rat(5), 1}}});
    PhiSpec spec;
    spec.upper = {ParamMon::qpow(QuadForm::constant(Rat(-3))), ParamMon::param("b")};
    spec.lower = {ParamMon::param("c")};
    spec.arg = ParamMon::qpow(QuadForm::constant(Rat(1)));
    Series lhs = phi_eval(spec, env, Rat(12));
    Series rhs = qs_mul(qs_div(poch_fin(QMon<Rat>{Rat(5, 2), Rat(1)}, 3, Rat(12)), poch_fin(QMon<Rat>{Rat(5), Rat(1)}, 3, Rat(12))),
                        Series::monomial(Rat(8), 0, kInfiniteCap));
    CHECK(qs_equal(lhs, rhs));
}
