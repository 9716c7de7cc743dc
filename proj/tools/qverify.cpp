#include <iostream>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "qverify/verify.hpp"

using namespace qverify;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kSubstHelp = R"(Parameter values, comma separated or repeated.
Grammar:  name=VALUE  with  VALUE := c | q^e | c*q^e
          c := [-]p[/r] (decimal integers), e := [-]k (integer).
Example:  --subst "x=1/2*q^2,y=-3")";

struct Config {
    std::string order = "30";
    int trials = 3;
    unsigned long seed = 42;
    std::vector<std::string> subst;
    std::string format = "text";
    int jobs = 0;
    std::string catalog;
    bool reproducible = false;
};

SubstEnv parse_subst(const std::vector<std::string>& items)
{
    SubstEnv env;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::SyntaxError, "substitution '" + item + "' is not name=value");
        std::string name = item.substr(0, eq);
        name.erase(0, name.find_first_not_of(' '));
        name.erase(name.find_last_not_of(' ') + 1);
        static const std::regex ident("[A-Za-z][A-Za-z0-9]*");
        if (!std::regex_match(name, ident))
            fail(ErrorCode::SyntaxError, "bad parameter name '" + name + "'");
        ParseOptions o;
        o.params = std::set<std::string>{};
        ExprPtr v = parse(item.substr(eq + 1), o);
        bool neg = v->kind == Kind::Neg;
        if (neg)
            v = v->kids[0];
        if (v->kind != Kind::Mon || !v->mon.powers.empty() || !v->mon.qexp.is_constant() ||
            !v->mon.qexp.c0.is_integer() || v->mon.c.is_zero())
            fail(ErrorCode::SyntaxError, "substitution for " + name + " must read c*q^e with c != 0");
        ParamValue pv;
        pv.c = neg ? -v->mon.c : v->mon.c;
        pv.e = v->mon.qexp.c0.num().get_si();
        env.values[name] = pv;
    }
    return env;
}

int exit_for(const std::vector<VerificationReport>& rs)
{
    bool mismatch = false, error = false;
    for (const auto& r : rs) {
        mismatch = mismatch || r.has_mismatch();
        error = error || r.has_error();
    }
    return mismatch ? 1 : error ? 2 : 0;
}

int cmd_list(const Catalog& cat, const Config& cfg)
{
    if (cfg.format == "json") {
        ojson a = ojson::array();
        for (const auto& r : cat.list())
            a.push_back(ojson{{"id", r.id}, {"anchor", r.anchor}, {"params", r.params}});
        std::cout << a.dump(2) << "\n";
        return 0;
    }
    for (const auto& r : cat.list())
        std::cout << r.id << "\t" << r.anchor << "\n";
    return 0;
}

int cmd_show(const Catalog& cat, const Config& cfg, const std::string& id)
{
    const IdentityRecord& r = cat.get(id);
    auto insts = r.instances();
    if (cfg.format == "json") {
        ojson j{{"id", r.id}, {"anchor", r.anchor}, {"lhs", r.lhs_text}, {"rhs", r.rhs_text},
                {"params", r.params}, {"constraints", r.constraint_text}, {"family", r.family},
                {"cap", r.cap.str()}, {"instances", insts.size()}, {"notes", r.notes}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "id:          " << r.id << "\n"
              << "anchor:      " << r.anchor << "\n"
              << "lhs:         " << r.lhs_text << "\n"
              << "rhs:         " << r.rhs_text << "\n";
    std::cout << "params:     ";
    for (const auto& p : r.params)
        std::cout << " " << p;
    std::cout << "\nconstraints:";
    for (const auto& c : r.constraint_text)
        std::cout << " " << c << ";";
    std::cout << "\n";
    if (!r.family.empty())
        std::cout << "family:      " << r.family << "\n";
    std::cout << "instances:   " << insts.size() << "\n";
    if (!r.notes.empty())
        std::cout << "notes:       " << r.notes << "\n";
    return 0;
}

int cmd_expand(const Config& cfg, const std::string& target)
{
    Rat N = Rat::parse(cfg.order);
    SubstEnv env = parse_subst(cfg.subst);
    ExprPtr e;
    EvalOptions opts;
    static const std::regex side(R"(^([A-Za-z0-9_-]+)\.(lhs|rhs)$)");
    std::smatch m;
    if (std::regex_match(target, m, side)) {
        Catalog cat = Catalog::load(cfg.catalog);
        auto insts = cat.get(m[1]).instances();
        e = m[2] == "lhs" ? insts.front().lhs : insts.front().rhs;
        opts = insts.front().opts;
    } else {
        e = parse(target);
    }
    Series s = eval(e, env, N, opts);
    if (cfg.format == "json")
        std::cout << ojson{{"target", target}, {"order", N.str()}, {"series", s.str()}}.dump(2) << "\n";
    else
        std::cout << s.str() << "\n";
    return 0;
}

int cmd_verify(const Catalog& cat, const Config& cfg, const std::string& target)
{
    Rat N = Rat::parse(cfg.order);
    if (N < Rat(1))
        fail(ErrorCode::Precondition, "--order must be at least 1");
    std::vector<const IdentityRecord*> recs;
    if (target == "all") {
        for (const auto& r : cat.list())
            recs.push_back(&r);
    } else {
        recs.push_back(&cat.get(target));
    }
    std::vector<VerificationReport> reps;
    if (!cfg.subst.empty()) {
        SubstEnv env = parse_subst(cfg.subst);
        for (const auto* r : recs)
            reps.push_back(verify(*r, env, N));
    } else {
        reps = verify_many(recs, N, cfg.trials, cfg.seed, cfg.jobs);
    }
    if (cfg.format == "json") {
        if (target == "all")
            std::cout << reports_json(reps, cfg.reproducible) << "\n";
        else
            std::cout << report_json(reps.front(), cfg.reproducible) << "\n";
    } else {
        std::size_t ok = 0;
        for (const auto& r : reps) {
            std::cout << report_text(r);
            ok += r.passed();
        }
        if (reps.size() > 1)
            std::cout << ok << "/" << reps.size() << " entries pass\n";
    }
    return exit_for(reps);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact verification of q-series identities"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.set_config("--config", "", "File of 'key = value' lines; flags take precedence");
    app.add_option("--order", cfg.order, "Truncation order N (integer or p/r)");
    app.add_option("--trials", cfg.trials, "Random environments per entry")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Sampler seed");
    app.add_option("--subst", cfg.subst, kSubstHelp)->delimiter(',')->allow_extra_args(false);
    app.add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", cfg.jobs, "Worker threads for 'verify all' (0 = auto)")->check(CLI::NonNegativeNumber);
    app.add_option("--catalog", cfg.catalog, "Catalog directory");
    app.add_flag("--reproducible", cfg.reproducible, "Write elapsed_ms as 0 in JSON reports");

    std::string id, target;
    auto* list = app.add_subcommand("list", "List catalog entries");
    auto* show = app.add_subcommand("show", "Show one entry");
    show->add_option("id", id)->required();
    auto* expand = app.add_subcommand("expand", "Expand an expression or <id>.lhs / <id>.rhs");
    expand->add_option("target", target)->required();
    auto* ver = app.add_subcommand("verify", "Verify an entry or 'all'");
    ver->add_option("id", id)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (cfg.catalog.empty())
        cfg.catalog = Catalog::default_dir();

    try {
        if (*expand)
            return cmd_expand(cfg, target);
        Catalog cat = Catalog::load(cfg.catalog);
        if (*list)
            return cmd_list(cat, cfg);
        if (*show)
            return cmd_show(cat, cfg, id);
        if (*ver)
            return cmd_verify(cat, cfg, id);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
