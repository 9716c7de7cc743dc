#include <doctest.h>

#include <map>

#include "qverify/engine.hpp"

using namespace qverify;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Precondition;
}

// Partitions of n into parts differing by at least 2, with smallest part
// at least lo.
long gap_partitions(long n, long lo)
{
    if (n == 0)
        return 1;
    long c = 0;
    for (long p = lo; p <= n; ++p)
        c += gap_partitions(n - p, p + 2);
    return c;
}

// Naive truncated power series over Rat, indices 0..N.
using Naive = std::vector<Rat>;

Naive naive_mul(const Naive& a, const Naive& b)
{
    Naive c(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

// 1 / (1 - c q^s), s >= 1, by geometric expansion.
Naive naive_geo(const Rat& c, long s, std::size_t N)
{
    Naive g(N + 1, Rat(0));
    Rat p(1);
    for (std::size_t k = 0; k * static_cast<std::size_t>(s) <= N; ++k) {
        g[k * static_cast<std::size_t>(s)] = p;
        p *= c;
    }
    return g;
}

SubstEnv env_of(std::map<std::string, ParamValue> v)
{
    SubstEnv e;
    e.values = std::move(v);
    return e;
}

} // namespace

TEST_CASE("eval: first Rogers-Ramanujan sum against a partition count")
{
    Series s = eval(parse("sum(n>=0) q^(n^2)/poch(q;n)"), {}, Rat(8));
    for (long n = 0; n <= 8; ++n)
        CHECK(s.coeff(n) == Rat(gap_partitions(n, 1)));
    CHECK(s.coeff(8) == Rat(4));
    Series s2 = eval(parse("sum(n>=0) q^(n^2)/poch(q;n)"), {}, Rat(30));
    for (long n = 0; n <= 30; ++n)
        CHECK(s2.coeff(n) == Rat(gap_partitions(n, 1)));
}

TEST_CASE("eval: product side by geometric expansion")
{
    const std::size_t N = 40;
    Series s = eval(parse("1/(poch_inf(q;5)*poch_inf(q^4;5))"), {}, Rat(static_cast<long>(N)));
    Naive o(N + 1, Rat(0));
    o[0] = Rat(1);
    for (std::size_t k = 1; k <= N; ++k)
        if (k % 5 == 1 || k % 5 == 4)
            o = naive_mul(o, naive_geo(Rat(1), static_cast<long>(k), N));
    for (std::size_t k = 0; k <= N; ++k)
        CHECK(s.coeff(static_cast<long>(k)) == o[k]);
}

TEST_CASE("eval: bare monomial and tau")
{
    SubstEnv env = env_of({{"x", {Rat(2, 3), 1}}});
    Series m = eval(parse("3*x^2*q^4"), env, Rat(10));
    CHECK(m.str() == "4/3*q^6 + O(q^11)");
    Series t = eval(parse("tau(5)"), {}, Rat(12));
    CHECK(t.str() == "-q^10 + O(q^13)");
}

TEST_CASE("eval: Euler sum against the reciprocal product")
{
    // sum x^n/(q;q)_n = 1/(x;q)_inf, x = 2/3 q
    const std::size_t N = 25;
    SubstEnv env = env_of({{"x", {Rat(2, 3), 1}}});
    Series s = eval(parse("sum(n>=0) x^(n)/poch(q;n)"), env, Rat(static_cast<long>(N)));
    Naive o(N + 1, Rat(0));
    o[0] = Rat(1);
    for (std::size_t k = 0; k + 1 <= N; ++k)
        o = naive_mul(o, naive_geo(Rat(2, 3), static_cast<long>(k + 1), N));
    for (std::size_t k = 0; k <= N; ++k)
        CHECK(s.coeff(static_cast<long>(k)) == o[k]);
}

TEST_CASE("eval: non-coercive substitution")
{
    SubstEnv env = env_of({{"x", {Rat(1), 0}}});
    CHECK(code_of([&] { eval(parse("sum(n>=0) x^(n)/poch(q;n)"), env, Rat(10)); }) == ErrorCode::NonCoercive);
    CHECK(code_of([&] { eval(parse("x*y"), env, Rat(10)); }) == ErrorCode::UnknownParameter);
}

TEST_CASE("eval: negative valuations and division")
{
    // q^-3 / (1 - q) and (q^-2; q)_3 = (1 - q^-2)(1 - q^-1)(1 - 1) = 0
    Series a = eval(parse("q^(-3)/poch(q;1)"), {}, Rat(2));
    CHECK(a.str() == "q^-3 + q^-2 + q^-1 + 1 + q + q^2 + O(q^3)");
    Series z = eval(parse("poch(q^(-2);3)"), {}, Rat(5));
    CHECK(z.is_exact_zero());
    SubstEnv env = env_of({{"b", {Rat(2), 0}}});
    // (b;q)_{-2} = 1/((1-b/q)(1-b/q^2))
    Series bneg = eval(parse("poch(b;-2)*(1 - 2*q^(-1))*(1 - 2*q^(-2))"), env, Rat(6));
    CHECK(bneg.str() == "1 + O(q^7)");
}

TEST_CASE("eval: terminating sums with a negative-power parameter")
{
    // q-Chu-Vandermonde: 2phi1(q^-n, b; c; q, q) = (c/b;q)_n b^n / (c;q)_n
    SubstEnv env = env_of({{"b", {Rat(3), 0}}, {"c", {Rat(1, 2), 1}}});
    for (long n = 0; n <= 6; ++n) {
        std::string nn = std::to_string(n);
        ExprPtr lhs = parse("phi(q^(-" + nn + "), b; c; 1; q)");
        ExprPtr rhs = parse("poch(c/b; " + nn + ")*b^" + nn + "/poch(c; " + nn + ")");
        CompareResult r = compare_sides(lhs, rhs, env, Rat(20));
        CHECK_MESSAGE(r.pass, "n = " << n);
    }
}

TEST_CASE("coeff_extract")
{
    Ring<PolyCoeff> ring{2};
    PolySeries s = PolySeries::from_coeffs(0, 5, {ring.one(), ring.u_power(Rat(1), 1)}, ring);
    CHECK(coeff_extract(s, 1).str() == "q + O(q^6)");
    CHECK(coeff_extract(s, 0).str() == "1 + O(q^6)");
    CHECK(code_of([&] { coeff_extract(s, 3); }) == ErrorCode::Precondition);

    // [t^n] (t x; q)_inf = tau(n) x^n / (q;q)_n
    SubstEnv env = env_of({{"x", {Rat(2), 1}}});
    env.symbolic = "t";
    env.u_cap = 5;
    PolySeries p = eval_poly(parse("poch_inf(x*t)"), env, Rat(20));
    SubstEnv renv = env_of({{"x", {Rat(2), 1}}});
    for (int n = 0; n <= 5; ++n) {
        Series direct = eval(parse("tau(" + std::to_string(n) + ")*x^" + std::to_string(n) + "/poch(q;" +
                                   std::to_string(n) + ")"),
                             renv, Rat(20));
        CHECK(qs_equal(coeff_extract(p, n), direct));
    }
}

TEST_CASE("eval: grid from rational exponents")
{
    Series s = eval(parse("sum(n>=0) q^(n^2/2)/poch(q;n)"), {}, Rat(3));
    CHECK(s.denom() == 2);
    // sum q^(n^2/2)/(q;q)_n = (-q^(1/2);q)_inf
    Series p = eval(parse("poch_inf(-q^(1/2))"), {}, Rat(3));
    CHECK(qs_equal(s, p));
}
