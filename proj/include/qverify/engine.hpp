#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qverify/qexpr.hpp"
#include "qverify/qseries.hpp"
#include "qverify/valcert.hpp"

namespace qverify {

/// Value c * q^e of a parameter.
struct ParamValue {
    Rat c{1};
    long e = 0;
    friend bool operator==(const ParamValue&, const ParamValue&) = default;
};

struct SubstEnv {
    std::map<std::string, ParamValue> values;
    /// Parameter kept as the auxiliary symbol u (polynomial mode).
    std::optional<std::string> symbolic;
    int u_cap = 0;

    std::string str() const;
};

/// Per-identity evaluation options.
struct EvalOptions {
    /// Valuation bound a n^2 + b n + c for [t^n] coefficients, keyed by the
    /// tcoeff symbol.
    std::map<std::string, std::array<Rat, 3>> tcoeff_bounds;
    /// Largest u-degree kept in polynomial mode.
    int max_u_cap = 32;
};

/// Least grid denominator d such that every exponent of e lies in Z/d.
int expr_grid(const ExprPtr& e);

/// Exact expansion of e up to and including q^N. In rational mode every
/// parameter must be assigned.
Series eval(const ExprPtr& e, const SubstEnv& env, const Rat& N, const EvalOptions& opts = {}, int grid = 0);
PolySeries eval_poly(const ExprPtr& e, const SubstEnv& env, const Rat& N, const EvalOptions& opts = {},
                     int grid = 0);

/// The series whose q-coefficients are the u^n components of s.
Series coeff_extract(const PolySeries& s, int n);

/// Static bounds of the summands of a Sum node under env (one per
/// flattened summand).
std::vector<TermShape> summand_shapes(const ExprPtr& sum, const SubstEnv& env, int grid = 0);

/// A summand's exponent shape together with its exact value at a point
/// (grid-unit cap). Summands carrying index-free factors are skipped.
struct SummandProbe {
    TermShape shape;
    int grid = 1;
    std::function<Series(const std::vector<long>&, long)> value;
};
std::vector<SummandProbe> probe_summands(const ExprPtr& sum, const SubstEnv& env, int grid = 0,
                                         const EvalOptions& opts = {});

struct Mismatch {
    Rat exponent;
    std::string lhs, rhs;
};

struct CompareResult {
    bool pass = false;
    Rat window_lo, window_hi;
    std::optional<Mismatch> mismatch;
    Series lhs, rhs;
};

/// Expands both sides under env and compares them on the common window.
CompareResult compare_sides(const ExprPtr& lhs, const ExprPtr& rhs, const SubstEnv& env, const Rat& N,
                            const EvalOptions& opts = {});

} // namespace qverify
