#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qverify/coeffring.hpp"

namespace qverify {

/// Integer affine form over the k indices of a summand.
struct AffineI {
    long c0 = 0;
    std::vector<long> w;

    long eval(const std::vector<long>& x) const
    {
        long r = c0;
        for (std::size_t i = 0; i < w.size(); ++i)
            r += w[i] * x[i];
        return r;
    }
    bool is_constant() const
    {
        for (long x : w)
            if (x != 0)
                return false;
        return true;
    }
};

/// Rational quadratic c0 + l.x + sum_{a<=b} Q[a][b] x_a x_b.
struct QuadR {
    Rat c0;
    std::vector<Rat> l;
    std::vector<std::vector<Rat>> Q;

    explicit QuadR(std::size_t k = 0) : l(k), Q(k, std::vector<Rat>(k)) {}
    std::size_t dim() const { return l.size(); }
    Rat eval(const std::vector<long>& x) const;
    void add_affine(const AffineI& a, const Rat& scale);
    /// Adds scale * a * b.
    void add_product(const AffineI& a, const AffineI& b, const Rat& scale);
    std::string str(const std::vector<std::string>& names) const;
};

/// F_M(s) = sum_{k>=0} min(0, s + M k): the valuation defect of a product of
/// binomials 1 - c q^(s + M k).
long defect(long s, long M);

/// Finite Pochhammer factor (c q^E; q^M)_L raised to sign (+1 numerator,
/// -1 denominator). Exponents are in grid units.
struct PochShape {
    AffineI E, L;
    long M = 1;
    int sign = 1;
    /// c is exactly 1, so a factor 1 - q^0 can vanish.
    bool unit_one = false;
    std::string what;
};

/// Index-dependent series factor with a declared valuation bound
/// a L^2 + b L + c in its degree L (0 <= L <= cap).
struct DeclaredBound {
    AffineI L;
    std::array<Rat, 3> abc;
    long cap = 0;
    std::string what;
};

/// Exponent structure of one flattened summand under a substitution.
struct TermShape {
    std::vector<std::string> names;
    QuadR qexp{0};
    std::vector<PochShape> poch;
    std::vector<AffineI> support;
    std::vector<DeclaredBound> declared;

    std::size_t dim() const { return names.size(); }
};

/// Exact q-valuation of the summand at an index point (grid units), or
/// nullopt when a support constraint or a vanishing numerator factor makes
/// the summand identically zero there.
std::optional<long> exact_valuation(const TermShape& t, const std::vector<long>& x);

/// Region idx = v + W y with y ranging over N^r, plus a quadratic lower
/// bound for the summand valuation on it.
struct Cone {
    std::vector<long> v;
    std::vector<std::vector<long>> W; // k rows, r columns
    QuadR bound{0};
    /// Loop order (outermost first) over the r cone coordinates.
    std::vector<int> order;
    /// Elimination forms: level[i] bounds the valuation given the first
    /// i+1 coordinates of `order`.
    std::vector<QuadR> level;
    bool relaxed = false;

    std::size_t rank() const { return W.empty() ? 0 : W[0].size(); }
    std::vector<long> point(const std::vector<long>& y) const;
};

struct ValBound {
    std::vector<std::string> names;
    std::vector<Cone> cones;

    /// Bound given directly as one quadratic on the whole lattice.
    static ValBound from_quadratic(const std::vector<std::string>& names, const QuadR& q);
};

/// Pole when a unit denominator factor vanishes at a small index point inside
/// the support, even where a numerator zero would cancel it.
void check_small_poles(const TermShape& t);

/// Static valuation bound for a summand. Raises NonCoercive when the bound
/// does not grow in some lattice direction, UnresolvedSign when it only
/// fails after a conservative relaxation.
ValBound val_lower_bound(const TermShape& t);

/// Index points whose cone bound is <= N, in lexicographic order.
std::vector<std::vector<long>> enumeration_domain(const ValBound& b, const Rat& N);

/// Orders a cone's coordinates so each loop level is bounded; false when no
/// order works.
bool plan_cone(Cone& c);

} // namespace qverify
