#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qverify/engine.hpp"

namespace qverify {

/// One admissibility condition on a parameter's (c, e) value.
///   e_x >= k, e_x <= k, e_x = k, e_x >= e_y + k, e_x <= e_y + k,
///   c_x != v, c_x = v
struct Constraint {
    enum class Op { Ge, Le, Eq, Ne };
    bool on_c = false;
    std::string param;
    Op op = Op::Ge;
    /// Relational exponent constraints compare with e_other + k.
    std::optional<std::string> other;
    long k = 0;
    Rat value;

    bool holds(const SubstEnv& env) const;
    std::vector<std::string> names() const;
    std::string str() const;
    static Constraint parse(const std::string& text);
};

/// A_n instantiation used by general-sequence entries.
struct FamilyMember {
    std::string name;
    std::string text; // DSL with n standing for the argument
    std::vector<std::string> params;
    std::vector<Constraint> constraints;
};

/// The five members, each with its own parameter names.
const std::vector<FamilyMember>& general_family();

/// A concrete identity to check: one variant of one family member.
struct Instance {
    std::string label;
    ExprPtr lhs, rhs;
    std::vector<std::string> params;  // sampled parameters
    std::vector<Constraint> constraints;
    EvalOptions opts;
};

struct IdentityRecord {
    std::string id;
    std::string anchor;
    std::string notes;
    std::string lhs_text, rhs_text;
    std::vector<std::string> params;
    std::vector<std::string> constraint_text;
    std::string family;              // "", "general" or "causal"
    std::vector<std::string> members; // subset of the family, empty = all
    Rat cap{30};
    std::vector<std::string> symbolic; // formal variables, never sampled
    std::map<std::string, std::string> bound_text;
    /// Each variant assigns text to {key} placeholders.
    std::vector<std::map<std::string, std::string>> variants;

    std::vector<Instance> instances() const;
};

IdentityRecord parse_record(const IdentityText& t);

class Catalog {
public:
    static Catalog load(const std::string& dir);
    /// Directory compiled in, overridable by QVERIFY_CATALOG.
    static std::string default_dir();

    const std::vector<IdentityRecord>& list() const { return records_; }
    const IdentityRecord& get(const std::string& id) const;

private:
    std::vector<IdentityRecord> records_;
};

} // namespace qverify
