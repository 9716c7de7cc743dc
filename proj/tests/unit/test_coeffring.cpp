#include <doctest.h>

#include <random>

#include "qverify/coeffring.hpp"

using namespace qverify;

namespace {

Rat random_rat(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-40, 40), den(1, 30);
    return Rat(num(rng), den(rng));
}

PolyCoeff random_poly(std::mt19937_64& rng, int cap)
{
    std::vector<Rat> c;
    for (int k = 0; k <= cap; ++k)
        c.push_back(random_rat(rng));
    return PolyCoeff(cap, c);
}

} // namespace

TEST_CASE("rational arithmetic")
{
    CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
    CHECK((Rat(2, 3) * Rat(3, 4)).str() == "1/2");
    CHECK(Rat(2, 3).inverse() == Rat(3, 2));
    CHECK(Rat(6, -4).str() == "-3/2");
    CHECK(Rat(0, 7).str() == "0");
    CHECK(Rat(0, 7).den() == 1);
    CHECK(Rat::parse("-12/8") == Rat(-3, 2));
    CHECK(Rat::parse("5").str() == "5");
    CHECK_THROWS_AS(Rat::parse("1.5"), Error);
    CHECK_THROWS_AS(Rat(0).inverse(), Error);
    CHECK(Rat(-7, 2).floor() == -4);
    CHECK(Rat(-7, 2).ceil() == -3);
    CHECK(Rat(2, 3).pow(-2) == Rat(9, 4));
}

TEST_CASE("polynomial coefficients")
{
    PolyCoeff a(2, std::vector<Rat>{1, 1});
    PolyCoeff b(2, std::vector<Rat>{1, -1});
    CHECK((a + b).coeffs() == std::vector<Rat>{2, 0, 0});

    PolyCoeff one_plus_u(1, std::vector<Rat>{1, 1});
    CHECK((one_plus_u * one_plus_u).str() == "1 + 2*u");

    PolyCoeff inv = PolyCoeff(2, std::vector<Rat>{1, -1}).inverse();
    CHECK(inv.str() == "1 + u + u^2");

    CHECK_THROWS_AS(PolyCoeff::monomial(2, 1, 1).inverse(), Error);
    try {
        (void)(PolyCoeff(2, Rat(1)) + PolyCoeff(3, Rat(1)));
        FAIL("expected mode mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ModeMismatch);
    }
    CHECK(PolyCoeff(3, std::vector<Rat>{0, -1, 0, Rat(2, 3)}).str() == "-u + 2/3*u^3");
}

TEST_CASE("ring axioms on random samples")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Rat a = random_rat(rng), b = random_rat(rng), c = random_rat(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero())
            CHECK(a * a.inverse() == Rat(1));
        CHECK(Rat(a.raw()) == a);

        int cap = trial % 5;
        PolyCoeff p = random_poly(rng, cap), r = random_poly(rng, cap), s = random_poly(rng, cap);
        CHECK((p * r) * s == p * (r * s));
        CHECK(p * (r + s) == p * r + p * s);
        CHECK(p * r == r * p);
        if (p.is_unit())
            CHECK((p * p.inverse()).is_one());
    }
}
