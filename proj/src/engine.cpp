#include "qverify/engine.hpp"

#include <atomic>
#include <numeric>

#include "qverify/hyper.hpp"

namespace qverify {

namespace {

std::string fresh_name(const std::string& stem)
{
    static std::atomic<long> counter{0};
    return stem + "#" + std::to_string(++counter);
}

// ---------------------------------------------------------------- grid

long quad_grid(const QuadForm& q)
{
    return q.grid_denominator();
}

long mon_grid(const ParamMon& m)
{
    return quad_grid(m.qexp);
}

void grid_walk(const ExprPtr& e, long& d)
{
    auto take = [&](long g) { d = std::lcm(d, g); };
    switch (e->kind) {
    case Kind::Mon:
    case Kind::PochFin:
    case Kind::PochInf:
        take(mon_grid(e->mon));
        break;
    case Kind::Pow:
        take(mon_grid(e->mon));
        take(quad_grid(QuadForm::product(e->mon.qexp, QuadForm::from_lin(e->a))));
        break;
    case Kind::Phi: {
        for (const auto& u : e->upper)
            take(mon_grid(u));
        for (const auto& l : e->lower)
            take(mon_grid(l));
        take(mon_grid(e->mon));
        take(quad_grid(QuadForm::product(e->mon.qexp, QuadForm::from_lin(LinForm::var("#n")))));
        break;
    }
    case Kind::Nahm: {
        NahmSpec spec{e->A, e->B, e->C};
        grid_walk(nahm_as_sum(spec, "#n"), d);
        break;
    }
    default:
        break;
    }
    for (const auto& k : e->kids)
        grid_walk(k, d);
}

// ---------------------------------------------------------------- flattening

// One summand after distributing products over sums: a constant, the lattice
// indices it ranges over, index-dependent atoms and index-free factors that
// are evaluated on their own.
struct FlatTerm {
    Rat coeff{1};
    std::vector<std::string> indices;
    std::vector<ExprPtr> num, den;
    std::vector<ExprPtr> hnum, hden;
};

using Flat = std::vector<FlatTerm>;

Flat product(const Flat& a, const Flat& b)
{
    Flat out;
    for (const auto& x : a)
        for (const auto& y : b) {
            FlatTerm t = x;
            t.coeff *= y.coeff;
            t.indices.insert(t.indices.end(), y.indices.begin(), y.indices.end());
            t.num.insert(t.num.end(), y.num.begin(), y.num.end());
            t.den.insert(t.den.end(), y.den.begin(), y.den.end());
            t.hnum.insert(t.hnum.end(), y.hnum.begin(), y.hnum.end());
            t.hden.insert(t.hden.end(), y.hden.begin(), y.hden.end());
            out.push_back(std::move(t));
        }
    return out;
}

Flat single_atom(const ExprPtr& e)
{
    FlatTerm t;
    t.num.push_back(e);
    return {t};
}

Flat single_hoisted(const ExprPtr& e)
{
    FlatTerm t;
    t.hnum.push_back(e);
    return {t};
}

bool is_compound(Kind k)
{
    switch (k) {
    case Kind::Sum:
    case Kind::Add:
    case Kind::Div:
    case Kind::Phi:
    case Kind::Nahm:
    case Kind::PochInf:
    case Kind::TCoeff:
        return true;
    default:
        return false;
    }
}

Flat flatten(const ExprPtr& e);

Flat flatten_factor(const ExprPtr& e)
{
    if (is_compound(e->kind) && free_indices(e).empty())
        return single_hoisted(e);
    return flatten(e);
}

Flat flatten(const ExprPtr& e)
{
    switch (e->kind) {
    case Kind::Mon:
    case Kind::PochFin:
    case Kind::InvPochQ:
    case Kind::Tau:
    case Kind::QBinom:
    case Kind::Pow:
        return single_atom(e);
    case Kind::TCoeff:
        if (free_indices(e).empty())
            return single_hoisted(e);
        if (!free_indices(e->kids[0]).empty())
            fail(ErrorCode::Precondition, "coefficient extraction body depends on an outer index");
        return single_atom(e);
    case Kind::PochInf:
        if (!free_indices(e).empty())
            fail(ErrorCode::Precondition, "infinite product with an index-dependent base");
        return single_hoisted(e);
    case Kind::Nahm:
        return single_hoisted(e);
    case Kind::Phi:
        if (free_indices(e).empty())
            return single_hoisted(e);
        return flatten(phi_as_sum(*e, fresh_name("k")));
    case Kind::SeqRef:
        fail(ErrorCode::Precondition, "A(" + e->a.str() + ") has no family member substituted");
    case Kind::Neg: {
        Flat f = flatten(e->kids[0]);
        for (auto& t : f)
            t.coeff = -t.coeff;
        return f;
    }
    case Kind::Add: {
        Flat out;
        for (const auto& k : e->kids) {
            Flat f = flatten(k);
            out.insert(out.end(), f.begin(), f.end());
        }
        return out;
    }
    case Kind::Mul: {
        Flat out{FlatTerm{}};
        for (const auto& k : e->kids)
            out = product(out, flatten_factor(k));
        return out;
    }
    case Kind::Div: {
        Flat num = flatten_factor(e->kids[0]);
        const ExprPtr& den = e->kids[1];
        FlatTerm inv;
        if (free_indices(den).empty() && is_compound(den->kind)) {
            inv.hden.push_back(den);
        } else {
            Flat d = flatten(den);
            if (free_indices(den).empty() && (d.size() != 1 || !d[0].indices.empty())) {
                inv = FlatTerm{};
                inv.hden.push_back(den);
            } else {
                if (d.size() != 1 || !d[0].indices.empty())
                    fail(ErrorCode::Precondition, "index-dependent sum in a denominator");
                const FlatTerm& t = d[0];
                inv.coeff = t.coeff.inverse();
                inv.num = t.den;
                inv.den = t.num;
                inv.hnum = t.hden;
                inv.hden = t.hnum;
            }
        }
        return product(num, {inv});
    }
    case Kind::Sum: {
        std::map<std::string, std::string> ren;
        std::vector<std::string> idx;
        for (const auto& i : e->indices) {
            ren[i] = fresh_name(i);
            idx.push_back(ren[i]);
        }
        ExprPtr body = rename_indices(e->kids[0], ren);
        Flat f = flatten(body);
        for (auto& t : f)
            t.indices.insert(t.indices.begin(), idx.begin(), idx.end());
        return f;
    }
    }
    fail(ErrorCode::Precondition, "unsupported expression node");
}

// ---------------------------------------------------------------- lowering

template <class R>
R rpow(const R& base, long e, const Ring<R>& ring)
{
    if (e < 0)
        return rpow(coeff_invert(base), -e, ring);
    R result = ring.one();
    R b = base;
    while (e > 0) {
        if (e & 1)
            result = coeff_mul(result, b);
        e >>= 1;
        if (e > 0)
            b = coeff_mul(b, b);
    }
    return result;
}

template <class R>
struct LTerm {
    TermShape shape;
    R coeff;
    std::vector<std::pair<R, AffineI>> powers;
    std::vector<R> poch_c;
    std::vector<ExprPtr> tco; // parallel to shape.declared
};

template <class R>
class Lowering {
public:
    Lowering(const SubstEnv& env, const Ring<R>& ring, int d, const EvalOptions& opts)
        : env_(env), ring_(ring), d_(d), opts_(opts)
    {
    }

    LTerm<R> lower(const FlatTerm& t)
    {
        LTerm<R> out;
        out.shape.names = t.indices;
        pos_.clear();
        for (std::size_t i = 0; i < t.indices.size(); ++i)
            pos_[t.indices[i]] = i;
        out.shape.qexp = QuadR(t.indices.size());
        out.coeff = ring_.from(t.coeff);
        for (const auto& a : t.num)
            atom(out, a, false);
        for (const auto& a : t.den)
            atom(out, a, true);
        return out;
    }

    R param_value(const std::string& p, long& e) const
    {
        if constexpr (Ring<R>::symbolic) {
            if (env_.symbolic && *env_.symbolic == p) {
                e = 0;
                return ring_.u_power(Rat(1), 1);
            }
        }
        auto it = env_.values.find(p);
        if (it == env_.values.end())
            fail(ErrorCode::UnknownParameter, "no substitution for parameter '" + p + "'");
        e = it->second.e;
        return ring_.from(it->second.c);
    }

    // Coefficient and grid-unit exponent of a parameter monomial.
    std::pair<R, QuadR> mon_value(const ParamMon& m) const
    {
        R c = ring_.from(m.c);
        QuadR e(pos_.size());
        Rat shift(0);
        for (const auto& [p, k] : m.powers) {
            long pe = 0;
            R v = param_value(p, pe);
            c = coeff_mul(c, rpow(v, k, ring_));
            shift += Rat(pe * k);
        }
        e.c0 = (m.qexp.c0 + shift) * Rat(d_);
        for (const auto& [v, k] : m.qexp.lin)
            e.l[index_of(v)] += k * Rat(d_);
        for (const auto& [vv, k] : m.qexp.quad) {
            std::size_t a = index_of(vv.first), b = index_of(vv.second);
            e.Q[std::min(a, b)][std::max(a, b)] += k * Rat(d_);
        }
        return {c, e};
    }

    AffineI aff(const LinForm& l) const
    {
        AffineI a;
        a.c0 = l.c0;
        a.w.assign(pos_.size(), 0);
        for (const auto& [v, k] : l.w)
            a.w[index_of(v)] += k;
        return a;
    }

    AffineI to_affine(const QuadR& q, const std::string& what) const
    {
        AffineI a;
        a.w.assign(q.dim(), 0);
        for (std::size_t i = 0; i < q.dim(); ++i)
            for (std::size_t j = i; j < q.dim(); ++j)
                if (!q.Q[i][j].is_zero())
                    fail(ErrorCode::Precondition, what + " has a quadratic exponent");
        if (!q.c0.is_integer())
            fail(ErrorCode::GridMismatch, what + " has exponent off the grid");
        a.c0 = q.c0.num().get_si();
        for (std::size_t i = 0; i < q.dim(); ++i) {
            if (!q.l[i].is_integer())
                fail(ErrorCode::GridMismatch, what + " has exponent off the grid");
            a.w[i] = q.l[i].num().get_si();
        }
        return a;
    }

private:
    std::size_t index_of(const std::string& v) const
    {
        auto it = pos_.find(v);
        if (it == pos_.end())
            fail(ErrorCode::UnboundIndex, "index '" + v + "' is not bound");
        return it->second;
    }

    void add_poch(LTerm<R>& out, const R& c, const AffineI& E, const AffineI& L, long M, int sign,
                  const std::string& what)
    {
        if (is_zero(c))
            return;
        PochShape p;
        p.E = E;
        p.L = L;
        p.M = M;
        p.sign = sign;
        p.unit_one = is_one(c);
        p.what = what;
        if (p.unit_one && sign < 0 && E.is_constant() && !L.is_constant() && E.c0 <= 0 && E.c0 % M == 0)
            fail(ErrorCode::Pole, what + " vanishes once its length exceeds " + std::to_string(-E.c0 / M));
        // Constant denominators are checked here: numerator zeros may cut every lattice point before
        // the pointwise pole check sees them.
        if (p.unit_one && sign < 0 && E.is_constant() && L.is_constant() && E.c0 <= 0 && E.c0 % M == 0 &&
            -E.c0 / M < L.c0)
            fail(ErrorCode::Pole, what + " has a vanishing denominator factor");
        out.shape.poch.push_back(std::move(p));
        out.poch_c.push_back(c);
    }

    void atom(LTerm<R>& out, const ExprPtr& a, bool inv)
    {
        const int sg = inv ? -1 : 1;
        const std::string what = pretty(a);
        switch (a->kind) {
        case Kind::Mon: {
            auto [c, e] = mon_value(a->mon);
            out.coeff = coeff_mul(out.coeff, inv ? coeff_invert(c) : c);
            add_quad(out.shape.qexp, e, Rat(sg));
            break;
        }
        case Kind::PochFin: {
            auto [c, e] = mon_value(a->mon);
            add_poch(out, c, to_affine(e, what), aff(a->a), a->m * d_, sg, what);
            break;
        }
        case Kind::InvPochQ: {
            AffineI E;
            E.c0 = d_;
            E.w.assign(pos_.size(), 0);
            add_poch(out, ring_.one(), E, aff(a->a), d_, -sg, what);
            if (!inv)
                out.shape.support.push_back(aff(a->a));
            break;
        }
        case Kind::Tau: {
            AffineI L = aff(a->a);
            out.powers.push_back({ring_.from(Rat(-1)), L});
            AffineI Lm1 = L;
            Lm1.c0 -= 1;
            out.shape.qexp.add_product(L, Lm1, Rat(sg * a->p * d_, 2));
            break;
        }
        case Kind::QBinom: {
            AffineI n = aff(a->a), k = aff(a->b);
            AffineI nk = n;
            nk.c0 -= k.c0;
            for (std::size_t i = 0; i < nk.w.size(); ++i)
                nk.w[i] -= k.w[i];
            AffineI E;
            E.c0 = a->m * d_;
            E.w.assign(pos_.size(), 0);
            const long M = a->m * d_;
            add_poch(out, ring_.one(), E, n, M, sg, what);
            add_poch(out, ring_.one(), E, k, M, -sg, what);
            add_poch(out, ring_.one(), E, nk, M, -sg, what);
            if (!inv) {
                out.shape.support.push_back(k);
                out.shape.support.push_back(nk);
            }
            break;
        }
        case Kind::Pow: {
            auto [c, e] = mon_value(a->mon);
            AffineI L = aff(a->a);
            AffineI E = to_affine(e, what);
            out.powers.push_back({inv ? coeff_invert(c) : c, L});
            out.shape.qexp.add_product(E, L, Rat(sg));
            break;
        }
        case Kind::TCoeff: {
            if (inv)
                fail(ErrorCode::Precondition, "coefficient extraction in a denominator");
            auto it = opts_.tcoeff_bounds.find(a->name);
            if (it == opts_.tcoeff_bounds.end())
                fail(ErrorCode::NonCoercive, "no valuation bound declared for [" + a->name + "^n] in " + what);
            DeclaredBound b;
            b.L = aff(a->a);
            b.abc = it->second;
            b.cap = 1000000;
            b.what = what;
            out.shape.declared.push_back(b);
            out.tco.push_back(a);
            break;
        }
        default:
            fail(ErrorCode::Precondition, "unexpected atom " + what);
        }
    }

    static void add_quad(QuadR& dst, const QuadR& src, const Rat& s)
    {
        dst.c0 += s * src.c0;
        for (std::size_t i = 0; i < src.dim(); ++i) {
            dst.l[i] += s * src.l[i];
            for (std::size_t j = i; j < src.dim(); ++j)
                dst.Q[i][j] += s * src.Q[i][j];
        }
    }

    const SubstEnv& env_;
    Ring<R> ring_;
    int d_;
    const EvalOptions& opts_;
    std::map<std::string, std::size_t> pos_;
};

// ---------------------------------------------------------------- evaluation

template <class R>
class Evaluator {
public:
    using S = QSeries<R>;
    using FactorFn = std::function<S(long)>;

    Evaluator(const SubstEnv& env, const Ring<R>& ring, int d, const EvalOptions& opts)
        : env_(env), ring_(ring), d_(d), opts_(opts), low_(env, ring, d, opts)
    {
    }

    S eval(const ExprPtr& e, long N)
    {
        switch (e->kind) {
        case Kind::PochInf: {
            auto [c, q] = low_.mon_value(e->mon);
            AffineI E = low_.to_affine(q, pretty(e));
            return poch_inf(QMon<R>{c, Rat(E.c0, d_)}, Rat(N, d_), ring_, e->m, d_);
        }
        case Kind::Phi:
            return eval(phi_as_sum(*e, fresh_name("k")), N);
        case Kind::Nahm:
            check_positive_definite(e->A);
            return eval(nahm_as_sum(NahmSpec{e->A, e->B, e->C}, fresh_name("n")), N);
        case Kind::TCoeff:
            if constexpr (Ring<R>::symbolic) {
                fail(ErrorCode::Precondition, "nested coefficient extraction");
            } else {
                if (!e->a.is_constant())
                    fail(ErrorCode::UnboundIndex, "coefficient degree " + e->a.str() + " is not bound");
                long n = e->a.c0;
                if (n < 0)
                    return S::from_coeffs(N + 1, N, {}, ring_, d_);
                PolySeries body = body_series(e.get(), static_cast<int>(n), N);
                return coeff_extract(body, static_cast<int>(n));
            }
        default: {
            Flat f = flatten(e);
            S acc = S::exact_zero(ring_, d_);
            for (const auto& t : f)
                acc = qs_add(acc, eval_term(t, N));
            return acc;
        }
        }
    }

    LTerm<R> lower(const FlatTerm& t) { return low_.lower(t); }

    // Value of one summand at an index point, exact up to grid exponent N.
    S point_value(const LTerm<R>& t, const std::vector<long>& x, long N, const std::vector<PolySeries>& tser)
    {
        R c = t.coeff;
        for (const auto& [b, L] : t.powers)
            c = coeff_mul(c, rpow(b, L.eval(x), ring_));
        Rat qr = t.shape.qexp.eval(x);
        if (!qr.is_integer())
            fail(ErrorCode::GridMismatch, "summand exponent " + qr.str() + " is off the grid");
        const long qe = qr.num().get_si();
        std::vector<Binomial<R>> num, den;
        for (std::size_t j = 0; j < t.shape.poch.size(); ++j) {
            const PochShape& f = t.shape.poch[j];
            const long E = f.E.eval(x), L = f.L.eval(x);
            if (L >= 0) {
                for (long k = 0; k < L; ++k)
                    (f.sign > 0 ? num : den).push_back({t.poch_c[j], E + f.M * k});
            } else {
                for (long k = 1; k <= -L; ++k)
                    (f.sign > 0 ? den : num).push_back({t.poch_c[j], E - f.M * k});
            }
        }
        std::vector<S> extra;
        long extra_v = 0;
        if constexpr (!Ring<R>::symbolic) {
            for (std::size_t j = 0; j < t.tco.size(); ++j) {
                long L = t.shape.declared[j].L.eval(x);
                S s = coeff_extract(tser[j], static_cast<int>(L));
                extra_v += s.is_empty() ? s.cap() + 1 : s.v0();
                extra.push_back(std::move(s));
            }
        }
        S p = binomial_product(num, den, N - qe - extra_v, ring_, d_);
        for (const auto& s : extra)
            p = qs_mul(p, s);
        return qs_shift(p, c, qe);
    }

    // tcoeff series for point_value at a single point.
    std::vector<PolySeries> point_tser(const LTerm<R>& t, const std::vector<long>& x, long N)
    {
        std::vector<PolySeries> out;
        if constexpr (!Ring<R>::symbolic) {
            auto v = exact_valuation(t.shape, x);
            for (std::size_t j = 0; j < t.tco.size(); ++j) {
                const DeclaredBound& db = t.shape.declared[j];
                long L = std::max(0L, db.L.eval(x));
                Rat bl = db.abc[0] * Rat(L * L) + db.abc[1] * Rat(L) + db.abc[2];
                long need = v ? std::max(N, N - (*v - bl.ceil())) : N;
                out.push_back(body_series(t.tco[j].get(), static_cast<int>(L), need));
            }
        }
        return out;
    }

private:
    PolySeries body_series(const Expr* tc, int ucap, long N)
    {
        if (ucap > opts_.max_u_cap)
            fail(ErrorCode::Precondition, "coefficient degree " + std::to_string(ucap) + " exceeds the symbolic cap " +
                                              std::to_string(opts_.max_u_cap));
        SubstEnv penv = env_;
        penv.symbolic = tc->name;
        penv.values.erase(tc->name);
        penv.u_cap = ucap;
        Ring<PolyCoeff> pr{ucap};
        Evaluator<PolyCoeff> sub(penv, pr, d_, opts_);
        return sub.eval(tc->kids[0], N).truncate(N);
    }

    S product(const std::vector<FactorFn>& fs, long N)
    {
        const std::size_t n = fs.size();
        std::vector<S> s(n);
        std::vector<long> v(n);
        auto val = [](const S& x) { return x.is_empty() ? x.cap() + 1 : x.v0(); };
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = fs[j](N);
            if (s[j].is_exact_zero())
                return S::exact_zero(ring_, d_);
            v[j] = val(s[j]);
        }
        for (int iter = 0; iter < 16; ++iter) {
            bool changed = false;
            long total = 0;
            for (long x : v)
                total += x;
            for (std::size_t j = 0; j < n; ++j) {
                long need = N - (total - v[j]);
                if (s[j].cap() < need) {
                    s[j] = fs[j](need);
                    if (s[j].is_exact_zero())
                        return S::exact_zero(ring_, d_);
                    total += val(s[j]) - v[j];
                    v[j] = val(s[j]);
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        S r = s[0];
        for (std::size_t j = 1; j < n; ++j)
            r = qs_mul(r, s[j]);
        if (r.cap() < N)
            fail(ErrorCode::IndeterminateValuation, "could not reach the requested precision");
        return r;
    }

    S eval_term(const FlatTerm& t, long N)
    {
        std::vector<FactorFn> fs;
        for (const auto& h : t.hnum)
            fs.push_back([this, h](long K) { return eval(h, K); });
        for (const auto& h : t.hden) {
            auto vd = std::make_shared<std::optional<long>>();
            fs.push_back([this, h, vd](long K) {
                if (!*vd) {
                    for (long c = K;; c += std::max<long>(8, d_ * 8)) {
                        S probe = eval(h, c);
                        if (probe.is_exact_zero())
                            fail(ErrorCode::Pole, "denominator " + pretty(h) + " vanishes identically");
                        if (!probe.is_empty()) {
                            *vd = probe.v0();
                            break;
                        }
                        if (c > K + 256 * d_)
                            fail(ErrorCode::IndeterminateValuation,
                                 "denominator " + pretty(h) + " has no nonzero coefficient below q^" +
                                     Rat(c, d_).str());
                    }
                }
                long v = **vd;
                S den = eval(h, std::max(K + 2 * v, v));
                return qs_invert(den);
            });
        }
        auto lt = std::make_shared<LTerm<R>>(low_.lower(t));
        auto vb = std::make_shared<std::optional<ValBound>>();
        fs.push_back([this, lt, vb](long K) {
            if (!*vb)
                *vb = val_lower_bound(lt->shape);
            return sum_points(*lt, **vb, K);
        });
        return product(fs, N);
    }

    S sum_points(const LTerm<R>& t, const ValBound& b, long N)
    {
        if (t.shape.dim() == 0 && !exact_valuation(t.shape, {}))
            return S::exact_zero(ring_, d_);
        auto cands = enumeration_domain(b, Rat(N));
        std::vector<std::pair<const std::vector<long>*, long>> pts;
        long lo = N + 1;
        for (const auto& x : cands) {
            auto v = exact_valuation(t.shape, x);
            if (!v || *v > N)
                continue;
            pts.push_back({&x, *v});
            lo = std::min(lo, *v);
        }
        if (pts.empty())
            return S::from_coeffs(N + 1, N, {}, ring_, d_);

        std::vector<PolySeries> tser;
        if constexpr (!Ring<R>::symbolic) {
            for (std::size_t j = 0; j < t.tco.size(); ++j) {
                const DeclaredBound& db = t.shape.declared[j];
                long maxL = 0;
                long need = N;
                for (const auto& [x, v] : pts) {
                    long L = db.L.eval(*x);
                    maxL = std::max(maxL, L);
                    Rat bl = db.abc[0] * Rat(L * L) + db.abc[1] * Rat(L) + db.abc[2];
                    need = std::max(need, N - (v - bl.ceil()));
                }
                tser.push_back(body_series(t.tco[j].get(), static_cast<int>(maxL), need));
                // The declared bound must hold wherever it was relied on.
                for (const auto& [x, v] : pts) {
                    long L = db.L.eval(*x);
                    Series s = coeff_extract(tser.back(), static_cast<int>(L));
                    Rat bl = db.abc[0] * Rat(L * L) + db.abc[1] * Rat(L) + db.abc[2];
                    if (!s.is_empty() && Rat(s.v0()) < bl)
                        fail(ErrorCode::NonCoercive, "declared bound for " + db.what + " fails at degree " +
                                                         std::to_string(L));
                }
            }
        }

        std::vector<R> acc(static_cast<std::size_t>(N - lo + 1), ring_.zero());
        for (const auto& [x, v] : pts) {
            S s = point_value(t, *x, N, tser);
            if (s.is_exact_zero())
                continue;
            if (s.cap() < N)
                fail(ErrorCode::IndeterminateValuation, "summand precision fell short");
            const auto& c = s.coeffs();
            for (std::size_t k = 0; k < c.size(); ++k) {
                long e = s.v0() + static_cast<long>(k);
                if (e > N)
                    break;
                if (e < lo)
                    fail(ErrorCode::Precondition, "summand valuation below its certified bound");
                if (!is_zero(c[k]))
                    acc[static_cast<std::size_t>(e - lo)] += c[k];
            }
        }
        return S::from_coeffs(lo, N, std::move(acc), ring_, d_);
    }

    const SubstEnv& env_;
    Ring<R> ring_;
    int d_;
    const EvalOptions& opts_;
    Lowering<R> low_;
};

int full_grid(const ExprPtr& e, const Rat& N, int grid)
{
    long d = grid > 0 ? grid : expr_grid(e);
    d = std::lcm(d, N.den().get_si());
    return static_cast<int>(d);
}

long grid_cap(const Rat& N, int d)
{
    return (N * Rat(d)).floor();
}

} // namespace

std::string SubstEnv::str() const
{
    std::string out;
    for (const auto& [p, v] : values) {
        if (!out.empty())
            out += ", ";
        out += p + "=" + v.c.str() + "*q^" + std::to_string(v.e);
    }
    if (symbolic)
        out += (out.empty() ? "" : ", ") + *symbolic + "=u";
    return out;
}

int expr_grid(const ExprPtr& e)
{
    long d = 1;
    grid_walk(e, d);
    return static_cast<int>(d);
}

Series eval(const ExprPtr& e, const SubstEnv& env, const Rat& N, const EvalOptions& opts, int grid)
{
    if (env.symbolic)
        fail(ErrorCode::ModeMismatch, "rational evaluation with a symbolic parameter");
    const int d = full_grid(e, N, grid);
    Evaluator<Rat> ev(env, Ring<Rat>{}, d, opts);
    return ev.eval(e, grid_cap(N, d)).truncate(grid_cap(N, d));
}

PolySeries eval_poly(const ExprPtr& e, const SubstEnv& env, const Rat& N, const EvalOptions& opts, int grid)
{
    if (!env.symbolic)
        fail(ErrorCode::ModeMismatch, "polynomial evaluation needs a symbolic parameter");
    if (env.u_cap < 0 || env.u_cap > opts.max_u_cap)
        fail(ErrorCode::Precondition, "symbolic cap must lie in [0, " + std::to_string(opts.max_u_cap) + "]");
    const int d = full_grid(e, N, grid);
    Evaluator<PolyCoeff> ev(env, Ring<PolyCoeff>{env.u_cap}, d, opts);
    return ev.eval(e, grid_cap(N, d)).truncate(grid_cap(N, d));
}

Series coeff_extract(const PolySeries& s, int n)
{
    if (n < 0)
        fail(ErrorCode::Precondition, "negative coefficient degree");
    if (n > s.ring().cap)
        fail(ErrorCode::Precondition,
             "degree " + std::to_string(n) + " exceeds the symbolic cap " + std::to_string(s.ring().cap));
    if (s.is_exact_zero())
        return Series::exact_zero(Ring<Rat>{}, s.denom());
    std::vector<Rat> c;
    c.reserve(s.coeffs().size());
    for (const auto& p : s.coeffs())
        c.push_back(p[n]);
    return Series::from_coeffs(s.is_empty() ? s.cap() + 1 : s.v0(), s.cap(), std::move(c), Ring<Rat>{}, s.denom());
}

std::vector<TermShape> summand_shapes(const ExprPtr& sum, const SubstEnv& env, int grid)
{
    const int d = grid > 0 ? grid : expr_grid(sum);
    EvalOptions opts;
    Lowering<Rat> low(env, Ring<Rat>{}, d, opts);
    std::vector<TermShape> out;
    for (const auto& t : flatten(sum))
        out.push_back(low.lower(t).shape);
    return out;
}

std::vector<SummandProbe> probe_summands(const ExprPtr& sum, const SubstEnv& env, int grid, const EvalOptions& o)
{
    const int d = grid > 0 ? grid : expr_grid(sum);
    auto opts = std::make_shared<EvalOptions>(o);
    auto envp = std::make_shared<SubstEnv>(env);
    auto ev = std::make_shared<Evaluator<Rat>>(*envp, Ring<Rat>{}, d, *opts);
    std::vector<SummandProbe> out;
    for (const auto& t : flatten(sum)) {
        if (!t.hnum.empty() || !t.hden.empty())
            continue;
        auto lt = std::make_shared<LTerm<Rat>>(ev->lower(t));
        SummandProbe p;
        p.shape = lt->shape;
        p.grid = d;
        p.value = [ev, lt, opts, envp](const std::vector<long>& x, long N) {
            return ev->point_value(*lt, x, N, ev->point_tser(*lt, x, N));
        };
        out.push_back(std::move(p));
    }
    return out;
}

CompareResult compare_sides(const ExprPtr& lhs, const ExprPtr& rhs, const SubstEnv& env, const Rat& N,
                            const EvalOptions& opts)
{
    long d = std::lcm<long>(expr_grid(lhs), expr_grid(rhs));
    d = std::lcm(d, N.den().get_si());
    CompareResult r;
    r.lhs = eval(lhs, env, N, opts, static_cast<int>(d));
    r.rhs = eval(rhs, env, N, opts, static_cast<int>(d));
    const long cap = std::min(r.lhs.cap(), r.rhs.cap());
    long lo = std::min(r.lhs.is_empty() ? cap + 1 : r.lhs.v0(), r.rhs.is_empty() ? cap + 1 : r.rhs.v0());
    lo = std::min(lo, cap);
    r.window_lo = Rat(lo, d);
    r.window_hi = Rat(cap, d);
    auto diff = qs_first_difference(r.lhs, r.rhs);
    r.pass = !diff.has_value();
    if (diff)
        r.mismatch = Mismatch{Rat(*diff, d), r.lhs.coeff(*diff).str(), r.rhs.coeff(*diff).str()};
    return r;
}

} // namespace qverify
