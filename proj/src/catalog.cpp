#include "qverify/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

namespace qverify {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    std::erase_if(out, [](const std::string& x) { return x.empty(); });
    return out;
}

// Like split, but separators inside parentheses are kept.
std::vector<std::string> split_top(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        depth += ch == '(' ? 1 : ch == ')' ? -1 : 0;
        if (ch == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    std::erase_if(out, [](const std::string& x) { return x.empty(); });
    return out;
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty())
            out.push_back(line);
    }
    return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to)
{
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string fill(std::string s, const std::map<std::string, std::string>& v)
{
    for (const auto& [k, x] : v)
        s = replace_all(s, "{" + k + "}", x);
    return s;
}

std::array<Rat, 3> parse_bound(const std::string& text)
{
    ParseOptions o;
    o.bound = {"n"};
    ExprPtr e = parse("q^(" + text + ")", o);
    if (e->kind != Kind::Mon)
        fail(ErrorCode::SyntaxError, "bound must be a quadratic in n: " + text);
    const QuadForm& f = e->mon.qexp;
    std::array<Rat, 3> abc{Rat(0), Rat(0), f.c0};
    auto it = f.quad.find({"n", "n"});
    if (it != f.quad.end())
        abc[0] = it->second;
    auto jt = f.lin.find("n");
    if (jt != f.lin.end())
        abc[1] = jt->second;
    return abc;
}

ExprPtr member_at(const FamilyMember& m, bool causal, const LinForm& L)
{
    ParseOptions o;
    o.bound = {"n"};
    ExprPtr e = parse(m.text, o);
    if (causal)
        e = mk_term({e, mk_qbinom(LinForm::var("n"), LinForm::constant(0))});
    return substitute_indices(e, {{"n", L}});
}

} // namespace

// ---------------------------------------------------------------- constraints

bool Constraint::holds(const SubstEnv& env) const
{
    auto it = env.values.find(param);
    if (it == env.values.end())
        return true;
    if (on_c) {
        const Rat& c = it->second.c;
        return op == Op::Ne ? c != value : c == value;
    }
    long rhs = k;
    if (other) {
        auto jt = env.values.find(*other);
        if (jt == env.values.end())
            return true;
        rhs += jt->second.e;
    }
    const long e = it->second.e;
    switch (op) {
    case Op::Ge:
        return e >= rhs;
    case Op::Le:
        return e <= rhs;
    case Op::Eq:
        return e == rhs;
    case Op::Ne:
        return e != rhs;
    }
    return true;
}

std::vector<std::string> Constraint::names() const
{
    std::vector<std::string> n{param};
    if (other)
        n.push_back(*other);
    return n;
}

std::string Constraint::str() const
{
    static const char* ops[] = {">=", "<=", "=", "!="};
    std::string lhs = (on_c ? "c_" : "e_") + param;
    std::string rhs;
    if (on_c) {
        rhs = value.str();
    } else if (other) {
        rhs = "e_" + *other;
        if (k > 0)
            rhs += " + " + std::to_string(k);
        else if (k < 0)
            rhs += " - " + std::to_string(-k);
    } else {
        rhs = std::to_string(k);
    }
    return lhs + " " + ops[static_cast<int>(op)] + " " + rhs;
}

Constraint Constraint::parse(const std::string& text)
{
    static const std::regex re(R"(^\s*([ce])_([A-Za-z][A-Za-z0-9]*)\s*(>=|<=|!=|=)\s*(.+?)\s*$)");
    static const std::regex rel(R"(^e_([A-Za-z][A-Za-z0-9]*)\s*(?:([+-])\s*([0-9]+))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        fail(ErrorCode::SyntaxError, "cannot read constraint '" + text + "'");
    Constraint c;
    c.on_c = m[1] == "c";
    c.param = m[2];
    const std::string op = m[3];
    c.op = op == ">=" ? Op::Ge : op == "<=" ? Op::Le : op == "=" ? Op::Eq : Op::Ne;
    const std::string rhs = m[4];
    if (c.on_c) {
        if (c.op != Op::Eq && c.op != Op::Ne)
            fail(ErrorCode::SyntaxError, "coefficient constraints use = or !=: '" + text + "'");
        c.value = Rat::parse(rhs);
        return c;
    }
    std::smatch r;
    if (std::regex_match(rhs, r, rel)) {
        c.other = r[1];
        if (r[2].matched)
            c.k = (r[2] == "-" ? -1 : 1) * std::stol(r[3]);
        return c;
    }
    try {
        c.k = std::stol(rhs);
    } catch (...) {
        fail(ErrorCode::SyntaxError, "cannot read constraint '" + text + "'");
    }
    return c;
}

// ---------------------------------------------------------------- family

const std::vector<FamilyMember>& general_family()
{
    static const std::vector<FamilyMember> members = [] {
        std::vector<FamilyMember> f;
        f.push_back({"tau", "tau(n)*ty^(n)", {"ty"}, {}});
        f.push_back({"geo", "gw^(n)", {"gw"}, {Constraint::parse("e_gw >= 1"), Constraint::parse("e_gw <= 2")}});
        f.push_back({"poch", "poch(pa;n)*pz^(n)", {"pa", "pz"}, {Constraint::parse("c_pa != 1"), Constraint::parse("e_pz >= 1")}});
        f.push_back({"ratio",
                     "poch(ra1,ra2;n)/poch(rb1;n)*ry^(n)",
                     {"ra1", "ra2", "rb1", "ry"},
                     {Constraint::parse("c_rb1 != 1"), Constraint::parse("e_ry >= 1")}});
        f.push_back({"delta", "invpochq(n)*invpochq(-n)", {}, {}});
        return f;
    }();
    return members;
}

// ---------------------------------------------------------------- records

IdentityRecord parse_record(const IdentityText& t)
{
    IdentityRecord r;
    r.id = t.id;
    auto sec = [&](const std::string& k) -> std::string {
        auto it = t.sections.find(k);
        return it == t.sections.end() ? std::string() : it->second;
    };
    if (!sec("ID").empty() && trim(sec("ID")) != t.id)
        fail(ErrorCode::SyntaxError, t.id + ": ID section does not match the file name");
    for (const char* need : {"LHS", "RHS"})
        if (!t.sections.count(need))
            fail(ErrorCode::SyntaxError, t.id + ": missing " + std::string(need) + " section");
    r.anchor = trim(sec("ANCHOR"));
    r.notes = trim(sec("NOTES"));
    r.lhs_text = sec("LHS");
    r.rhs_text = sec("RHS");
    for (const auto& p : split(replace_all(sec("PARAMS"), "\n", ","), ','))
        for (const auto& w : split(p, ' '))
            r.params.push_back(w);
    for (const auto& line : lines_of(sec("CONSTRAINTS")))
        for (const auto& c : split(line, ','))
            r.constraint_text.push_back(c);
    auto fam = split(trim(sec("FAMILY")), ' ');
    if (!fam.empty()) {
        r.family = fam[0];
        if (r.family != "general" && r.family != "causal")
            fail(ErrorCode::SyntaxError, t.id + ": unknown family '" + r.family + "'");
        for (std::size_t i = 1; i < fam.size(); ++i)
            for (const auto& m : split(fam[i], ','))
                r.members.push_back(m);
    }
    if (!trim(sec("CAP")).empty())
        r.cap = Rat::parse(trim(sec("CAP")));
    for (const auto& sym : split(replace_all(sec("SYMBOLIC"), ",", " "), ' '))
        r.symbolic.push_back(sym);
    for (const auto& line : lines_of(sec("BOUNDS"))) {
        auto colon = line.find(':');
        if (colon == std::string::npos)
            fail(ErrorCode::SyntaxError, t.id + ": bound lines read 'symbol: quadratic in n'");
        r.bound_text[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
    }
    std::vector<std::map<std::string, std::string>> vars{{}};
    for (const auto& line : lines_of(sec("VARIANTS"))) {
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::SyntaxError, t.id + ": variant lines read 'key = a..b', 'key = v1, v2' or 'k1 k2 = a1 ; a2 | b1 ; b2'");
        std::vector<std::string> keys = split(trim(line.substr(0, eq)), ' ');
        std::string val = trim(line.substr(eq + 1));
        std::vector<std::vector<std::string>> rows;
        if (keys.size() > 1 || val.find('|') != std::string::npos) {
            for (const auto& alt : split_top(val, '|')) {
                auto row = split_top(alt, ';');
                if (row.size() != keys.size())
                    fail(ErrorCode::SyntaxError, t.id + ": variant '" + alt + "' needs " +
                                                     std::to_string(keys.size()) + " values");
                rows.push_back(row);
            }
        } else {
            auto dots = val.find("..");
            if (dots != std::string::npos) {
                long a = std::stol(val.substr(0, dots)), b = std::stol(val.substr(dots + 2));
                for (long x = a; x <= b; ++x)
                    rows.push_back({std::to_string(x)});
            } else {
                for (const auto& x : split(val, ','))
                    rows.push_back({x});
            }
        }
        std::vector<std::map<std::string, std::string>> next;
        for (const auto& v : vars)
            for (const auto& row : rows) {
                auto w = v;
                for (std::size_t k = 0; k < keys.size(); ++k)
                    w[keys[k]] = row[k];
                next.push_back(w);
            }
        vars = std::move(next);
    }
    if (!(vars.size() == 1 && vars[0].empty()))
        r.variants = std::move(vars);
    // Parse once so broken entries fail at load time.
    r.instances();
    return r;
}

std::vector<Instance> IdentityRecord::instances() const
{
    std::vector<Instance> out;
    std::vector<std::map<std::string, std::string>> vs = variants;
    if (vs.empty())
        vs.push_back({});
    std::set<std::string> declared(params.begin(), params.end());
    for (const auto& v : vs) {
        std::string vlabel;
        // Upper-case keys hold text fragments and stay out of the label.
        for (const auto& [k, x] : v)
            if (!std::isupper(static_cast<unsigned char>(k[0])))
                vlabel += (vlabel.empty() ? "" : ",") + k + "=" + x;
        ParseOptions o;
        o.params = declared;
        ExprPtr lhs, rhs;
        try {
            lhs = parse(fill(lhs_text, v), o);
            rhs = parse(fill(rhs_text, v), o);
        } catch (const Error& e) {
            std::string msg = e.what();
            fail(e.code(), id + ": " + msg.substr(msg.find(": ") + 2));
        }
        for (const auto* side : {&lhs, &rhs}) {
            auto diags = validate(*side, declared, !family.empty());
            if (!diags.empty())
                fail(ErrorCode::SyntaxError, id + ": " + diags.front());
        }
        std::vector<Constraint> cons;
        for (const auto& c : constraint_text)
            cons.push_back(Constraint::parse(fill(c, v)));
        EvalOptions opts;
        for (const auto& [sym, b] : bound_text)
            opts.tcoeff_bounds[sym] = parse_bound(fill(b, v));

        auto finish = [&](Instance inst) {
            std::set<std::string> ps = params_of(inst.lhs);
            for (const auto& p : params_of(inst.rhs))
                ps.insert(p);
            for (const auto& sym : symbolic)
                ps.erase(sym);
            inst.params.assign(ps.begin(), ps.end());
            std::vector<Constraint> kept;
            for (const auto& c : inst.constraints) {
                bool present = true;
                for (const auto& n : c.names())
                    present = present && ps.count(n);
                if (present)
                    kept.push_back(c);
            }
            inst.constraints = std::move(kept);
            inst.opts = opts;
            out.push_back(std::move(inst));
        };

        if (family.empty()) {
            finish(Instance{vlabel, lhs, rhs, {}, cons, {}});
            continue;
        }
        const bool causal = family == "causal";
        for (const auto& m : general_family()) {
            if (!members.empty() && std::find(members.begin(), members.end(), m.name) == members.end())
                continue;
            auto sub = [&](const LinForm& L) { return member_at(m, causal, L); };
            Instance inst;
            inst.label = vlabel.empty() ? m.name : vlabel + "," + m.name;
            inst.lhs = substitute_seqref(lhs, sub);
            inst.rhs = substitute_seqref(rhs, sub);
            inst.constraints = cons;
            inst.constraints.insert(inst.constraints.end(), m.constraints.begin(), m.constraints.end());
            finish(std::move(inst));
        }
    }
    return out;
}

// ---------------------------------------------------------------- catalog

std::string Catalog::default_dir()
{
    if (const char* env = std::getenv("QVERIFY_CATALOG"))
        return env;
#ifdef QVERIFY_CATALOG_DIR
    return QVERIFY_CATALOG_DIR;
#else
    return "catalog";
#endif
}

Catalog Catalog::load(const std::string& dir)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        fail(ErrorCode::Io, "catalog directory '" + dir + "' not found");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".qid")
            files.push_back(e.path());
    Catalog c;
    for (const auto& f : files)
        c.records_.push_back(parse_record(read_identity_text(f.string())));
    std::sort(c.records_.begin(), c.records_.end(),
              [](const IdentityRecord& a, const IdentityRecord& b) { return a.id < b.id; });
    return c;
}

const IdentityRecord& Catalog::get(const std::string& id) const
{
    for (const auto& r : records_)
        if (r.id == id)
            return r;
    fail(ErrorCode::UnknownId, "no catalog entry '" + id + "'");
}

} // namespace qverify
