#include <doctest.h>

#include "support/checks.hpp"

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

SubstEnv env_x(const Rat& c, long e)
{
    SubstEnv env;
    env.values["x"] = {c, e};
    return env;
}

} // namespace

TEST_CASE("defect of a binomial run")
{
    CHECK(defect(2, 1) == 0);
    CHECK(defect(0, 1) == 0);
    CHECK(defect(-3, 1) == -6);
    CHECK(defect(-5, 2) == -9);
    CHECK(defect(-6, 3) == -9);
}

TEST_CASE("enumeration domains")
{
    QuadR a(1);
    a.Q[0][0] = 1;
    a.l[0] = 1;
    CHECK(enumeration_domain(ValBound::from_quadratic({"n"}, a), Rat(20)).size() == 5);

    QuadR b(2);
    b.l = {Rat(1), Rat(1)};
    CHECK(enumeration_domain(ValBound::from_quadratic({"i", "j"}, b), Rat(3)).size() == 10);

    QuadR c(2);
    c.l = {Rat(0), Rat(1)};
    auto code = code_of([&] { enumeration_domain(ValBound::from_quadratic({"i", "j"}, c), Rat(3)); });
    CHECK((code == ErrorCode::NonCoercive || code == ErrorCode::UnresolvedSign));
}

TEST_CASE("bounds from summand shapes")
{
    // q^(n^2) x^n / (q;q)_n at x = q: bound n^2 + n
    auto probes = probe_summands(parse("sum(n>=0) q^(n^2)*x^(n)/poch(q;n)"), env_x(Rat(1), 1));
    REQUIRE(probes.size() == 1);
    ValBound vb = val_lower_bound(probes[0].shape);
    CHECK(enumeration_domain(vb, Rat(20)).size() == 5);

    // x^j with x = 1 never decays
    auto flat = probe_summands(parse("sum(j>=0) x^(j)"), env_x(Rat(1), 0));
    auto code = code_of([&] { val_lower_bound(flat[0].shape); });
    CHECK((code == ErrorCode::NonCoercive || code == ErrorCode::UnresolvedSign));
    CHECK(code_of([&] { eval(parse("sum(j>=0) x^(j)"), env_x(Rat(1), 0), Rat(5)); }) == ErrorCode::NonCoercive);
}

TEST_CASE("vanishing numerator and denominator is a pole")
{
    // (q^-2;q)_n / (q^-2;q)_n is 0/0 from n = 3 on
    auto code = code_of([] { eval(parse("sum(n>=0) q^(n^2)*poch(q^(-2);n)/poch(q^(-2);n)"), {}, Rat(10)); });
    CHECK(code == ErrorCode::Pole);
    code = code_of([] { eval(parse("poch(q^(-1);3)/poch(q^(-1);3)"), {}, Rat(10)); });
    CHECK(code == ErrorCode::Pole);
    // a numerator zero alone just cuts the sum; at x = 2q the q-binomial
    // theorem leaves (2/q;q)_2 = 2/q - 1
    Series s = eval(parse("sum(n>=0) x^(n)*poch(q^(-2);n)/poch(q;n)"), env_x(Rat(2), 1), Rat(10));
    for (long e = -1; e <= 10; ++e)
        CHECK(s.coeff(e) == (e == -1 ? Rat(2) : e == 0 ? Rat(-1) : Rat(0)));
}

TEST_CASE("static bound never exceeds the exact valuation")
{
    Catalog cat = Catalog::load(Catalog::default_dir());
    for (const char* id : {"rr1", "thm-wang", "lem-gr-1", "ex-gauss-closed", "cor-999999-0", "ex-taup"}) {
        auto r = checks::soundness(cat.get(id));
        INFO(id << ": " << r.detail);
        CHECK(r.samples >= 1000);
        CHECK(r.violations == 0);
        CHECK(r.stable);
    }
}
