#include "qverify/qexpr.hpp"

#include <fstream>
#include <sstream>

namespace qverify {

namespace {

std::shared_ptr<Expr> node(Kind k)
{
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

bool is_q_base(const ParamMon& b)
{
    return b.c.is_one() && b.powers.empty() && b.qexp == QuadForm::constant(Rat(1));
}

} // namespace

bool operator==(const Expr& x, const Expr& y)
{
    if (x.kind != y.kind)
        return false;
    if (x.kids.size() != y.kids.size())
        return false;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (!expr_equal(x.kids[i], y.kids[i]))
            return false;
    return x.mon == y.mon && x.a == y.a && x.b == y.b && x.p == y.p && x.m == y.m && x.indices == y.indices &&
           x.upper == y.upper && x.lower == y.lower && x.A == y.A && x.B == y.B && x.C == y.C && x.name == y.name;
}

bool expr_equal(const ExprPtr& x, const ExprPtr& y)
{
    if (x == y)
        return true;
    if (!x || !y)
        return false;
    return *x == *y;
}

// ------------------------------------------------------------ constructors

ExprPtr mk_mon(const ParamMon& m)
{
    if (m.c.sign() < 0) {
        ParamMon p = m;
        p.c = -p.c;
        return mk_neg(mk_mon(p));
    }
    auto e = node(Kind::Mon);
    e->mon = m;
    e->mon.prune();
    return e;
}

ExprPtr mk_const(const Rat& c)
{
    return mk_mon(ParamMon::constant(c));
}

ExprPtr mk_poch(const ParamMon& base, const LinForm& n, long m)
{
    if (base.c.is_zero())
        return mk_const(1);
    auto e = node(Kind::PochFin);
    e->mon = base;
    e->mon.prune();
    e->a = n;
    e->m = m;
    return e;
}

ExprPtr mk_poch_inf(const ParamMon& base, long m)
{
    if (base.c.is_zero())
        return mk_const(1);
    auto e = node(Kind::PochInf);
    e->mon = base;
    e->mon.prune();
    e->m = m;
    return e;
}

ExprPtr mk_invpochq(const LinForm& n)
{
    auto e = node(Kind::InvPochQ);
    e->a = n;
    return e;
}

ExprPtr mk_tau(long p, const LinForm& n)
{
    auto e = node(Kind::Tau);
    e->p = p;
    e->a = n;
    return e;
}

ExprPtr mk_qbinom(const LinForm& n, const LinForm& k, long m)
{
    auto e = node(Kind::QBinom);
    e->a = n;
    e->b = k;
    e->m = m;
    return e;
}

ExprPtr mk_pow(const ParamMon& base, const LinForm& ex)
{
    if (ex.is_constant())
        return mk_mon(base.pow(ex.c0));
    auto e = node(Kind::Pow);
    e->mon = base;
    e->mon.prune();
    e->a = ex;
    return e;
}

ExprPtr mk_neg(const ExprPtr& x)
{
    if (x->kind == Kind::Neg)
        return x->kids[0];
    auto e = node(Kind::Neg);
    e->kids = {x};
    return e;
}

ExprPtr mk_add(const std::vector<ExprPtr>& terms)
{
    std::vector<ExprPtr> flat;
    for (const auto& t : terms) {
        if (t->kind == Kind::Add)
            flat.insert(flat.end(), t->kids.begin(), t->kids.end());
        else
            flat.push_back(t);
    }
    if (flat.size() == 1)
        return flat[0];
    if (flat.empty())
        return mk_const(0);
    auto e = node(Kind::Add);
    e->kids = std::move(flat);
    return e;
}

ExprPtr mk_term(const std::vector<ExprPtr>& num_in, const std::vector<ExprPtr>& den_in)
{
    bool negative = false;
    ParamMon mon;
    std::vector<ExprPtr> num, den;

    std::function<void(const ExprPtr&, bool)> take = [&](const ExprPtr& f, bool in_den) {
        switch (f->kind) {
        case Kind::Neg:
            negative = !negative;
            take(f->kids[0], in_den);
            return;
        case Kind::Mul:
            for (const auto& k : f->kids)
                take(k, in_den);
            return;
        case Kind::Div:
            take(f->kids[0], in_den);
            take(f->kids[1], !in_den);
            return;
        case Kind::Mon:
            mon *= in_den ? f->mon.inverse() : f->mon;
            return;
        case Kind::PochFin:
            if (in_den && f->m == 1 && is_q_base(f->mon)) {
                num.push_back(mk_invpochq(f->a));
                return;
            }
            break;
        default:
            break;
        }
        (in_den ? den : num).push_back(f);
    };
    for (const auto& f : num_in)
        take(f, false);
    for (const auto& f : den_in)
        take(f, true);

    if (mon.c.sign() < 0) {
        negative = !negative;
        mon.c = -mon.c;
    }
    std::vector<ExprPtr> factors;
    if (!mon.is_constant_one() || num.empty())
        factors.push_back(mk_mon(mon));
    factors.insert(factors.end(), num.begin(), num.end());

    ExprPtr numer;
    if (factors.size() == 1) {
        numer = factors[0];
    } else {
        auto e = node(Kind::Mul);
        e->kids = std::move(factors);
        numer = e;
    }
    ExprPtr out = numer;
    if (!den.empty()) {
        ExprPtr denom;
        if (den.size() == 1) {
            denom = den[0];
        } else {
            auto e = node(Kind::Mul);
            e->kids = std::move(den);
            denom = e;
        }
        auto e = node(Kind::Div);
        e->kids = {numer, denom};
        out = e;
    }
    return negative ? mk_neg(out) : out;
}

ExprPtr mk_mul(const std::vector<ExprPtr>& factors)
{
    return mk_term(factors);
}

ExprPtr mk_div(const ExprPtr& num, const ExprPtr& den)
{
    return mk_term({num}, {den});
}

ExprPtr mk_sum(const std::vector<std::string>& indices, const ExprPtr& body)
{
    auto e = node(Kind::Sum);
    e->indices = indices;
    e->kids = {body};
    return e;
}

ExprPtr mk_phi(const std::vector<ParamMon>& upper, const std::vector<ParamMon>& lower, long m, const ParamMon& arg)
{
    auto e = node(Kind::Phi);
    e->upper = upper;
    e->lower = lower;
    for (auto& u : e->upper)
        u.prune();
    for (auto& l : e->lower)
        l.prune();
    e->m = m;
    e->mon = arg;
    e->mon.prune();
    return e;
}

ExprPtr mk_nahm(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& B, const Rat& C)
{
    auto e = node(Kind::Nahm);
    e->A = A;
    e->B = B;
    e->C = C;
    return e;
}

ExprPtr mk_seqref(const LinForm& n)
{
    auto e = node(Kind::SeqRef);
    e->a = n;
    return e;
}

ExprPtr mk_tcoeff(const LinForm& n, const std::string& symbol, const ExprPtr& body)
{
    auto e = node(Kind::TCoeff);
    e->a = n;
    e->name = symbol;
    e->kids = {body};
    return e;
}

// ------------------------------------------------------------ printing

namespace {

enum class Ctx { Top, Factor, LastFactor };

std::string print(const ExprPtr& e, Ctx ctx);

std::string base_text(const ParamMon& m)
{
    return m.str();
}

std::string mon_list(const std::vector<ParamMon>& l)
{
    std::string out;
    for (std::size_t i = 0; i < l.size(); ++i)
        out += (i ? ", " : "") + base_text(l[i]);
    return out;
}

std::string with_m(long m)
{
    return m == 1 ? "" : "; " + std::to_string(m);
}

std::string factor_list(const ExprPtr& e, bool last_open)
{
    if (e->kind != Kind::Mul)
        return print(e, last_open ? Ctx::LastFactor : Ctx::Factor);
    std::string out;
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
        bool last = last_open && i + 1 == e->kids.size();
        out += (i ? "*" : "") + print(e->kids[i], last ? Ctx::LastFactor : Ctx::Factor);
    }
    return out;
}

std::string print_sum(const ExprPtr& e)
{
    std::string head = "sum(";
    for (std::size_t i = 0; i < e->indices.size(); ++i)
        head += (i ? ", " : "") + e->indices[i] + ">=0";
    head += ") ";
    const ExprPtr& body = e->kids[0];
    if (body->kind == Kind::Add || body->kind == Kind::Neg)
        return head + "(" + print(body, Ctx::Top) + ")";
    return head + print(body, Ctx::Top);
}

std::string rat_matrix(const std::vector<std::vector<Rat>>& A)
{
    std::string out = "[";
    for (std::size_t i = 0; i < A.size(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < A[i].size(); ++j)
            out += (j ? ", " : "") + A[i][j].str();
        out += "]";
    }
    return out + "]";
}

std::string rat_vector(const std::vector<Rat>& B)
{
    std::string out = "[";
    for (std::size_t j = 0; j < B.size(); ++j)
        out += (j ? ", " : "") + B[j].str();
    return out + "]";
}

std::string print(const ExprPtr& e, Ctx ctx)
{
    switch (e->kind) {
    case Kind::Mon:
        return base_text(e->mon);
    case Kind::PochFin:
        return "poch(" + base_text(e->mon) + "; " + e->a.str() + with_m(e->m) + ")";
    case Kind::PochInf:
        return "poch_inf(" + base_text(e->mon) + with_m(e->m) + ")";
    case Kind::InvPochQ:
        return "invpochq(" + e->a.str() + ")";
    case Kind::Tau:
        if (e->p == 1)
            return "tau(" + e->a.str() + ")";
        return "tau_p(" + std::to_string(e->p) + "; " + e->a.str() + ")";
    case Kind::QBinom:
        return "qbinom(" + e->a.str() + ", " + e->b.str() + with_m(e->m) + ")";
    case Kind::Pow: {
        const ParamMon& b = e->mon;
        bool bare = b.c.is_one() && b.qexp == QuadForm{} && b.powers.size() == 1 && b.powers.begin()->second == 1;
        std::string base = bare ? b.powers.begin()->first : "(" + base_text(b) + ")";
        return base + "^(" + e->a.str() + ")";
    }
    case Kind::Mul: {
        std::string s = factor_list(e, ctx != Ctx::Factor);
        return ctx == Ctx::Factor ? "(" + s + ")" : s;
    }
    case Kind::Div: {
        std::string s = factor_list(e->kids[0], false);
        const ExprPtr& d = e->kids[1];
        if (d->kind == Kind::Mul) {
            for (const auto& k : d->kids)
                s += "/" + print(k, Ctx::Factor);
        } else {
            s += "/" + print(d, Ctx::Factor);
        }
        return ctx == Ctx::Factor ? "(" + s + ")" : s;
    }
    case Kind::Add: {
        std::string s;
        for (std::size_t i = 0; i < e->kids.size(); ++i) {
            const ExprPtr& t = e->kids[i];
            if (t->kind == Kind::Neg)
                s += (i ? " - " : "-") + print(t->kids[0], Ctx::LastFactor);
            else
                s += (i ? " + " : "") + print(t, Ctx::LastFactor);
        }
        return ctx == Ctx::Top ? s : "(" + s + ")";
    }
    case Kind::Neg: {
        std::string s = "-" + print(e->kids[0], Ctx::LastFactor);
        return ctx == Ctx::Top ? s : "(" + s + ")";
    }
    case Kind::Sum: {
        std::string s = print_sum(e);
        return ctx == Ctx::Factor ? "(" + s + ")" : s;
    }
    case Kind::Phi:
        return "phi(" + mon_list(e->upper) + "; " + mon_list(e->lower) + "; " + std::to_string(e->m) + "; " +
               base_text(e->mon) + ")";
    case Kind::Nahm:
        return "nahm(" + rat_matrix(e->A) + "; " + rat_vector(e->B) + "; " + e->C.str() + ")";
    case Kind::SeqRef:
        return "A(" + e->a.str() + ")";
    case Kind::TCoeff:
        return "tcoeff(" + e->a.str() + "; " + e->name + "; " + print(e->kids[0], Ctx::Top) + ")";
    }
    return "?";
}

} // namespace

std::string pretty(const ExprPtr& e)
{
    return print(e, Ctx::Top);
}

// ------------------------------------------------------------ traversal

namespace {

void collect_params(const ParamMon& m, std::set<std::string>& out)
{
    for (const auto& [p, k] : m.powers)
        out.insert(p);
}

void walk(const ExprPtr& e, const std::function<void(const ExprPtr&)>& f)
{
    f(e);
    for (const auto& k : e->kids)
        walk(k, f);
}

void index_uses(const ExprPtr& e, std::set<std::string>& out)
{
    auto add = [&](const std::set<std::string>& s) { out.insert(s.begin(), s.end()); };
    switch (e->kind) {
    case Kind::Mon:
    case Kind::PochInf:
        add(e->mon.qexp.vars());
        break;
    case Kind::PochFin:
    case Kind::Pow:
        add(e->mon.qexp.vars());
        add(e->a.vars());
        break;
    case Kind::InvPochQ:
    case Kind::Tau:
    case Kind::SeqRef:
        add(e->a.vars());
        break;
    case Kind::QBinom:
        add(e->a.vars());
        add(e->b.vars());
        break;
    case Kind::Phi:
        for (const auto& u : e->upper)
            add(u.qexp.vars());
        for (const auto& l : e->lower)
            add(l.qexp.vars());
        add(e->mon.qexp.vars());
        break;
    case Kind::Sum: {
        std::set<std::string> inner;
        index_uses(e->kids[0], inner);
        for (const auto& i : e->indices)
            inner.erase(i);
        add(inner);
        return;
    }
    case Kind::TCoeff:
        add(e->a.vars());
        break;
    default:
        break;
    }
    for (const auto& k : e->kids)
        index_uses(k, out);
}

QuadForm subst_quad(const QuadForm& q, const std::map<std::string, LinForm>& sub)
{
    QuadForm r = QuadForm::constant(q.c0);
    auto image = [&](const std::string& v) {
        auto it = sub.find(v);
        return it == sub.end() ? QuadForm::from_lin(LinForm::var(v)) : QuadForm::from_lin(it->second);
    };
    for (const auto& [v, k] : q.lin)
        r += image(v) * k;
    for (const auto& [vv, k] : q.quad)
        r += QuadForm::product(image(vv.first), image(vv.second)) * k;
    return r;
}

LinForm subst_lin(const LinForm& l, const std::map<std::string, LinForm>& sub)
{
    LinForm r = LinForm::constant(l.c0);
    for (const auto& [v, k] : l.w) {
        auto it = sub.find(v);
        r += (it == sub.end() ? LinForm::var(v) : it->second) * k;
    }
    return r;
}

ParamMon subst_mon(const ParamMon& m, const std::map<std::string, LinForm>& sub)
{
    ParamMon r = m;
    r.qexp = subst_quad(m.qexp, sub);
    r.prune();
    return r;
}

// Rebuilds a node through the canonical constructors after mapping its
// children and its index-bearing fields.
ExprPtr rebuild(const ExprPtr& e, const std::function<ExprPtr(const ExprPtr&)>& kid,
                const std::map<std::string, LinForm>& sub)
{
    switch (e->kind) {
    case Kind::Mon:
        return mk_mon(subst_mon(e->mon, sub));
    case Kind::PochFin:
        return mk_poch(subst_mon(e->mon, sub), subst_lin(e->a, sub), e->m);
    case Kind::PochInf:
        return mk_poch_inf(subst_mon(e->mon, sub), e->m);
    case Kind::InvPochQ:
        return mk_invpochq(subst_lin(e->a, sub));
    case Kind::Tau:
        return mk_tau(e->p, subst_lin(e->a, sub));
    case Kind::QBinom:
        return mk_qbinom(subst_lin(e->a, sub), subst_lin(e->b, sub), e->m);
    case Kind::Pow:
        return mk_pow(subst_mon(e->mon, sub), subst_lin(e->a, sub));
    case Kind::Mul: {
        std::vector<ExprPtr> k;
        for (const auto& c : e->kids)
            k.push_back(kid(c));
        return mk_mul(k);
    }
    case Kind::Div:
        return mk_div(kid(e->kids[0]), kid(e->kids[1]));
    case Kind::Add: {
        std::vector<ExprPtr> k;
        for (const auto& c : e->kids)
            k.push_back(kid(c));
        return mk_add(k);
    }
    case Kind::Neg:
        return mk_neg(kid(e->kids[0]));
    case Kind::Sum:
        return mk_sum(e->indices, kid(e->kids[0]));
    case Kind::Phi: {
        std::vector<ParamMon> u, l;
        for (const auto& x : e->upper)
            u.push_back(subst_mon(x, sub));
        for (const auto& x : e->lower)
            l.push_back(subst_mon(x, sub));
        return mk_phi(u, l, e->m, subst_mon(e->mon, sub));
    }
    case Kind::Nahm:
        return e;
    case Kind::SeqRef:
        return mk_seqref(subst_lin(e->a, sub));
    case Kind::TCoeff:
        return mk_tcoeff(subst_lin(e->a, sub), e->name, kid(e->kids[0]));
    }
    return e;
}

} // namespace

std::set<std::string> params_of(const ExprPtr& e)
{
    std::set<std::string> out;
    walk(e, [&](const ExprPtr& n) {
        collect_params(n->mon, out);
        for (const auto& u : n->upper)
            collect_params(u, out);
        for (const auto& l : n->lower)
            collect_params(l, out);
        if (n->kind == Kind::TCoeff)
            out.insert(n->name);
    });
    return out;
}

std::set<std::string> free_indices(const ExprPtr& e)
{
    std::set<std::string> out;
    index_uses(e, out);
    return out;
}

bool contains_kind(const ExprPtr& e, Kind k)
{
    bool found = false;
    walk(e, [&](const ExprPtr& n) { found = found || n->kind == k; });
    return found;
}

ExprPtr substitute_seqref(const ExprPtr& e, const std::function<ExprPtr(const LinForm&)>& member)
{
    if (e->kind == Kind::SeqRef)
        return member(e->a);
    if (e->kids.empty())
        return e;
    return rebuild(e, [&](const ExprPtr& k) { return substitute_seqref(k, member); }, {});
}

ExprPtr substitute_indices(const ExprPtr& e, const std::map<std::string, LinForm>& sub)
{
    if (sub.empty())
        return e;
    if (e->kind == Kind::Sum) {
        std::map<std::string, LinForm> inner = sub;
        for (const auto& i : e->indices)
            inner.erase(i);
        return mk_sum(e->indices, substitute_indices(e->kids[0], inner));
    }
    return rebuild(e, [&](const ExprPtr& k) { return substitute_indices(k, sub); }, sub);
}

ExprPtr rename_indices(const ExprPtr& e, const std::map<std::string, std::string>& ren)
{
    std::map<std::string, LinForm> sub;
    for (const auto& [from, to] : ren)
        sub[from] = LinForm::var(to);
    if (e->kind == Kind::Sum) {
        std::vector<std::string> idx;
        for (const auto& i : e->indices) {
            auto it = ren.find(i);
            idx.push_back(it == ren.end() ? i : it->second);
        }
        return mk_sum(idx, rename_indices(e->kids[0], ren));
    }
    return rebuild(e, [&](const ExprPtr& k) { return rename_indices(k, ren); }, sub);
}

// ------------------------------------------------------------ validation

namespace {

struct Validator {
    const std::set<std::string>& params;
    bool allow_seqref;
    std::vector<std::string> diags;

    void mon(const ParamMon& m, const std::string& where, const std::set<std::string>& bound)
    {
        for (const auto& [p, k] : m.powers)
            if (!params.count(p))
                diags.push_back(where + ": undeclared parameter '" + p + "'");
        for (const auto& v : m.qexp.vars())
            if (!bound.count(v))
                diags.push_back(where + ": unbound index '" + v + "'");
        if (!m.qexp.integer_valued())
            diags.push_back(where + ": q-exponent " + m.qexp.str() + " not integer-valued on lattice");
    }

    void lin(const LinForm& l, const std::string& where, const std::set<std::string>& bound)
    {
        for (const auto& v : l.vars())
            if (!bound.count(v))
                diags.push_back(where + ": unbound index '" + v + "'");
    }

    void run(const ExprPtr& e, const std::string& path, std::set<std::string> bound)
    {
        switch (e->kind) {
        case Kind::Mon:
            mon(e->mon, path, bound);
            break;
        case Kind::PochFin:
        case Kind::Pow:
            mon(e->mon, path, bound);
            lin(e->a, path, bound);
            if (e->kind == Kind::Pow && !e->mon.qexp.is_linear())
                diags.push_back(path + ": power of a quadratic q-exponent is not quadratic");
            if (e->m < 1)
                diags.push_back(path + ": base power must be positive");
            break;
        case Kind::PochInf:
            mon(e->mon, path, bound);
            if (e->m < 1)
                diags.push_back(path + ": base power must be positive");
            break;
        case Kind::InvPochQ:
        case Kind::Tau:
            lin(e->a, path, bound);
            if (e->kind == Kind::Tau && e->p < 0)
                diags.push_back(path + ": tau_p needs p >= 0");
            break;
        case Kind::QBinom:
            lin(e->a, path, bound);
            lin(e->b, path, bound);
            break;
        case Kind::SeqRef:
            lin(e->a, path, bound);
            if (!allow_seqref)
                diags.push_back(path + ": A(...) used without an instantiation family");
            break;
        case Kind::Phi:
            if (e->upper.empty())
                diags.push_back(path + ": phi needs at least one upper parameter");
            for (const auto& u : e->upper)
                mon(u, path, bound);
            for (const auto& l : e->lower)
                mon(l, path, bound);
            mon(e->mon, path, bound);
            break;
        case Kind::Nahm: {
            std::size_t r = e->A.size();
            bool ok = r > 0 && e->B.size() == r;
            for (const auto& row : e->A)
                ok = ok && row.size() == r;
            for (std::size_t i = 0; ok && i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    ok = ok && e->A[i][j] == e->A[j][i];
            if (!ok)
                diags.push_back(path + ": nahm needs a symmetric r x r matrix and a length-r vector");
            break;
        }
        case Kind::Sum:
            for (const auto& i : e->indices) {
                if (bound.count(i))
                    diags.push_back(path + ": index '" + i + "' rebound");
                if (params.count(i))
                    diags.push_back(path + ": index '" + i + "' shadows a parameter");
                bound.insert(i);
            }
            run(e->kids[0], path + "/sum", bound);
            return;
        case Kind::TCoeff:
            lin(e->a, path, bound);
            if (!params.count(e->name))
                diags.push_back(path + ": undeclared parameter '" + e->name + "'");
            break;
        default:
            break;
        }
        for (std::size_t i = 0; i < e->kids.size(); ++i)
            run(e->kids[i], path + "/" + std::to_string(i), bound);
    }
};

} // namespace

std::vector<std::string> validate(const ExprPtr& e, const std::set<std::string>& params, bool allow_seqref)
{
    Validator v{params, allow_seqref, {}};
    v.run(e, "", {});
    return v.diags;
}

// ------------------------------------------------------------ identity files

IdentityText parse_identity_text(const std::string& id, const std::string& content)
{
    IdentityText t;
    t.id = id;
    std::istringstream in(content);
    std::string line, key;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#')
            continue;
        auto colon = line.find(':');
        bool is_key = colon != std::string::npos && colon > 0 && !std::isspace(static_cast<unsigned char>(line[0]));
        if (is_key) {
            for (std::size_t i = 0; i < colon; ++i) {
                char ch = line[i];
                if (!(std::isupper(static_cast<unsigned char>(ch)) || ch == '_'))
                    is_key = false;
            }
        }
        if (is_key) {
            key = line.substr(0, colon);
            if (t.sections.count(key))
                fail(ErrorCode::SyntaxError, id + ": duplicate section " + key);
            t.sections[key] = line.substr(colon + 1);
            continue;
        }
        if (key.empty()) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                fail(ErrorCode::SyntaxError, id + ": text before the first section");
            continue;
        }
        t.sections[key] += "\n" + line;
    }
    for (auto& [k, v] : t.sections) {
        auto b = v.find_first_not_of(" \t\r\n");
        auto e = v.find_last_not_of(" \t\r\n");
        v = b == std::string::npos ? "" : v.substr(b, e - b + 1);
    }
    return t;
}

IdentityText read_identity_text(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        fail(ErrorCode::Io, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string stem = path;
    auto slash = stem.find_last_of('/');
    if (slash != std::string::npos)
        stem = stem.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos)
        stem = stem.substr(0, dot);
    return parse_identity_text(stem, ss.str());
}

} // namespace qverify
