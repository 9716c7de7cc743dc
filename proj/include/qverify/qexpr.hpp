#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qverify/coeffring.hpp"

namespace qverify {

/// Integer affine form c0 + sum w[v] * v over index variables.
struct LinForm {
    long c0 = 0;
    std::map<std::string, long> w;

    static LinForm constant(long c) { return LinForm{c, {}}; }
    static LinForm var(const std::string& v, long k = 1);

    bool is_constant() const { return w.empty(); }
    long coeff(const std::string& v) const;
    std::set<std::string> vars() const;

    LinForm& operator+=(const LinForm& o);
    LinForm& operator-=(const LinForm& o);
    LinForm& operator*=(long k);
    friend LinForm operator+(LinForm a, const LinForm& b) { a += b; return a; }
    friend LinForm operator-(LinForm a, const LinForm& b) { a -= b; return a; }
    friend LinForm operator*(LinForm a, long k) { a *= k; return a; }
    friend LinForm operator-(LinForm a) { a *= -1; return a; }
    friend bool operator==(const LinForm&, const LinForm&) = default;

    long eval(const std::map<std::string, long>& at) const;
    std::string str() const;

private:
    void prune();
};

/// Rational quadratic polynomial over index variables.
struct QuadForm {
    Rat c0;
    std::map<std::string, Rat> lin;
    /// Keys are ordered pairs (a <= b).
    std::map<std::pair<std::string, std::string>, Rat> quad;

    static QuadForm constant(const Rat& c);
    static QuadForm from_lin(const LinForm& l);

    bool is_constant() const { return lin.empty() && quad.empty(); }
    bool is_linear() const { return quad.empty(); }
    std::set<std::string> vars() const;

    QuadForm& operator+=(const QuadForm& o);
    QuadForm& operator-=(const QuadForm& o);
    QuadForm& operator*=(const Rat& k);
    friend QuadForm operator+(QuadForm a, const QuadForm& b) { a += b; return a; }
    friend QuadForm operator-(QuadForm a, const QuadForm& b) { a -= b; return a; }
    friend QuadForm operator*(QuadForm a, const Rat& k) { a *= k; return a; }
    friend bool operator==(const QuadForm&, const QuadForm&) = default;

    /// Product of two forms; fails unless the total degree stays <= 2.
    static QuadForm product(const QuadForm& a, const QuadForm& b);

    /// Integer-valued at every integer point of the index lattice.
    bool integer_valued() const;
    /// Least d such that d * value is an integer at every lattice point.
    long grid_denominator() const;

    Rat eval(const std::map<std::string, long>& at) const;
    std::string str() const;

    void prune();
};

/// c * prod p^k * q^(qexp).
struct ParamMon {
    Rat c{1};
    std::map<std::string, long> powers;
    QuadForm qexp;

    static ParamMon constant(const Rat& c);
    static ParamMon param(const std::string& name, long k = 1);
    static ParamMon qpow(const QuadForm& e);

    bool is_constant_one() const;
    bool index_free() const { return qexp.is_constant(); }
    ParamMon& operator*=(const ParamMon& o);
    ParamMon inverse() const;
    ParamMon pow(long k) const;
    friend ParamMon operator*(ParamMon a, const ParamMon& b) { a *= b; return a; }
    friend bool operator==(const ParamMon&, const ParamMon&) = default;

    std::string str() const;
    void prune();
};

enum class Kind {
    Mon,
    PochFin,
    PochInf,
    InvPochQ,
    Tau,
    QBinom,
    Pow,
    Mul,
    Div,
    Add,
    Neg,
    Sum,
    Phi,
    Nahm,
    SeqRef,
    TCoeff
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Node of a q-expression. Only the fields relevant to `kind` are used:
///   Mon: mon | PochFin: mon, a (count), m | PochInf: mon, m
///   InvPochQ: a | Tau: p, a | QBinom: a (n), b (k), m | Pow: mon, a
///   Mul/Add: kids | Div: kids[0] / kids[1] | Neg: kids[0]
///   Sum: indices, kids[0] | Phi: upper, lower, m, mon (argument)
///   Nahm: A, B, C | SeqRef: a | TCoeff: a (degree), name, kids[0]
struct Expr {
    Kind kind = Kind::Mon;
    ParamMon mon;
    LinForm a, b;
    long p = 1;
    long m = 1;
    std::vector<ExprPtr> kids;
    std::vector<std::string> indices;
    std::vector<ParamMon> upper, lower;
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> B;
    Rat C;
    std::string name;

    friend bool operator==(const Expr& x, const Expr& y);
};

bool expr_equal(const ExprPtr& x, const ExprPtr& y);

// Canonicalizing constructors. The parser and the random AST generator both
// build trees through these, so printing and re-parsing is the identity.
ExprPtr mk_mon(const ParamMon& m);
ExprPtr mk_const(const Rat& c);
ExprPtr mk_poch(const ParamMon& base, const LinForm& n, long m = 1);
ExprPtr mk_poch_inf(const ParamMon& base, long m = 1);
ExprPtr mk_invpochq(const LinForm& n);
ExprPtr mk_tau(long p, const LinForm& n);
ExprPtr mk_qbinom(const LinForm& n, const LinForm& k, long m = 1);
ExprPtr mk_pow(const ParamMon& base, const LinForm& e);
ExprPtr mk_neg(const ExprPtr& e);
ExprPtr mk_add(const std::vector<ExprPtr>& terms);
/// Product of num factors divided by product of den factors.
ExprPtr mk_term(const std::vector<ExprPtr>& num, const std::vector<ExprPtr>& den = {});
ExprPtr mk_mul(const std::vector<ExprPtr>& factors);
ExprPtr mk_div(const ExprPtr& num, const ExprPtr& den);
ExprPtr mk_sum(const std::vector<std::string>& indices, const ExprPtr& body);
ExprPtr mk_phi(const std::vector<ParamMon>& upper, const std::vector<ParamMon>& lower, long m, const ParamMon& arg);
ExprPtr mk_nahm(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& B, const Rat& C);
ExprPtr mk_seqref(const LinForm& n);
ExprPtr mk_tcoeff(const LinForm& n, const std::string& symbol, const ExprPtr& body);

struct ParseOptions {
    /// Declared parameters; when absent any free identifier is a parameter.
    std::optional<std::set<std::string>> params;
    /// Indices bound by an enclosing context.
    std::set<std::string> bound;
};

ExprPtr parse(const std::string& text, const ParseOptions& opts = {});
std::string pretty(const ExprPtr& e);

/// Diagnostics for an expression; empty when it is well formed.
std::vector<std::string> validate(const ExprPtr& e, const std::set<std::string>& params, bool allow_seqref = false);

/// Parameters mentioned anywhere in e.
std::set<std::string> params_of(const ExprPtr& e);
/// Indices free in e (used but not bound inside e).
std::set<std::string> free_indices(const ExprPtr& e);
bool contains_kind(const ExprPtr& e, Kind k);

/// Replaces every A(L) with member(L).
ExprPtr substitute_seqref(const ExprPtr& e, const std::function<ExprPtr(const LinForm&)>& member);
/// Renames index variables according to the map (bound occurrences included).
ExprPtr rename_indices(const ExprPtr& e, const std::map<std::string, std::string>& ren);
/// Substitutes index variables by linear forms in free positions.
ExprPtr substitute_indices(const ExprPtr& e, const std::map<std::string, LinForm>& sub);

/// Raw sections of an identity file.
struct IdentityText {
    std::string id;
    std::map<std::string, std::string> sections;
};

IdentityText read_identity_text(const std::string& path);
IdentityText parse_identity_text(const std::string& id, const std::string& content);

} // namespace qverify
