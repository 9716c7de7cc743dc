#include "qverify/valcert.hpp"

#include <algorithm>
#include <numeric>

namespace qverify {

namespace {

constexpr long kSliceLimit = 400;
constexpr std::size_t kConeBudget = 20000;
constexpr long kLoopLimit = 2000000;

// Rational affine form, used while eliminating variables.
struct AffR {
    Rat c0;
    std::vector<Rat> l;
};

void add_square(QuadR& q, const AffR& a, const Rat& scale)
{
    const std::size_t k = q.dim();
    q.c0 += scale * a.c0 * a.c0;
    for (std::size_t i = 0; i < k; ++i)
        q.l[i] += scale * Rat(2) * a.c0 * a.l[i];
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            Rat c = a.l[i] * a.l[j];
            if (i != j)
                c *= Rat(2);
            q.Q[i][j] += scale * c;
        }
}

// y = t + S z with z in N^(cols of S).
struct AffMap {
    std::vector<long> t;
    std::vector<std::vector<long>> S;

    std::size_t rows() const { return t.size(); }
    std::size_t cols() const { return S.empty() ? 0 : S[0].size(); }
};

AffMap identity_map(std::size_t r)
{
    AffMap m;
    m.t.assign(r, 0);
    m.S.assign(r, std::vector<long>(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        m.S[i][i] = 1;
    return m;
}

AffMap compose(const AffMap& outer, const AffMap& inner)
{
    AffMap m;
    const std::size_t r = outer.rows(), mid = outer.cols(), c = inner.cols();
    m.t = outer.t;
    m.S.assign(r, std::vector<long>(c, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < mid; ++j) {
            long s = outer.S[i][j];
            if (s == 0)
                continue;
            m.t[i] += s * inner.t[j];
            for (std::size_t k = 0; k < c; ++k)
                m.S[i][k] += s * inner.S[j][k];
        }
    return m;
}

AffineI pull(const AffineI& g, const AffMap& m)
{
    AffineI r;
    r.c0 = g.c0;
    r.w.assign(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        long wi = g.w[i];
        if (wi == 0)
            continue;
        r.c0 += wi * m.t[i];
        for (std::size_t k = 0; k < m.cols(); ++k)
            r.w[k] += wi * m.S[i][k];
    }
    return r;
}

AffMap slice_map(std::size_t r, std::size_t a, long c)
{
    AffMap m;
    m.t.assign(r, 0);
    m.S.assign(r, std::vector<long>(r - 1, 0));
    for (std::size_t i = 0, j = 0; i < r; ++i) {
        if (i == a) {
            m.t[i] = c;
            continue;
        }
        m.S[i][j++] = 1;
    }
    return m;
}

AffMap shift_map(std::size_t r, std::size_t a, long c)
{
    AffMap m = identity_map(r);
    m.t[a] = c;
    return m;
}

// y_a = R(z) + z_a, every other coordinate unchanged; R does not involve a.
AffMap subst_map(std::size_t r, std::size_t a, const AffineI& R)
{
    AffMap m = identity_map(r);
    m.t[a] = R.c0;
    for (std::size_t k = 0; k < r; ++k)
        if (k != a)
            m.S[a][k] = R.w[k];
    return m;
}

bool nonneg_by_coeffs(const AffineI& g)
{
    if (g.c0 < 0)
        return false;
    return std::all_of(g.w.begin(), g.w.end(), [](long x) { return x >= 0; });
}

bool nonpos_by_coeffs(const AffineI& g)
{
    if (g.c0 > 0)
        return false;
    return std::all_of(g.w.begin(), g.w.end(), [](long x) { return x <= 0; });
}

long ceil_div(long a, long b)
{
    // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

long floor_div(long a, long b)
{
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

// Decomposes {y in N^r : g(y) >= 0} into cones y = t + S z. Returns nullopt
// when the region is not expressible this way (or too many slices).
std::optional<std::vector<AffMap>> restrict_y(std::size_t r, const AffineI& g)
{
    std::vector<AffMap> out;
    if (nonneg_by_coeffs(g)) {
        out.push_back(identity_map(r));
        return out;
    }
    bool all_pos = std::all_of(g.w.begin(), g.w.end(), [](long x) { return x >= 0; });
    bool all_neg = std::all_of(g.w.begin(), g.w.end(), [](long x) { return x <= 0; });
    if (all_pos && all_neg)
        return out; // constant and negative
    if (all_pos) {
        std::size_t a = 0;
        for (std::size_t i = 0; i < r; ++i)
            if (g.w[i] > g.w[a])
                a = i;
        long T = ceil_div(-g.c0, g.w[a]);
        if (T > kSliceLimit)
            return std::nullopt;
        for (long c = 0; c < T; ++c) {
            AffMap sl = slice_map(r, a, c);
            auto sub = restrict_y(r - 1, pull(g, sl));
            if (!sub)
                return std::nullopt;
            for (const auto& m : *sub)
                out.push_back(compose(sl, m));
        }
        out.push_back(shift_map(r, a, T));
        return out;
    }
    if (all_neg) {
        if (g.c0 < 0)
            return out;
        std::size_t a = 0;
        for (std::size_t i = 0; i < r; ++i)
            if (g.w[i] < g.w[a])
                a = i;
        long U = floor_div(g.c0, -g.w[a]);
        if (U + 1 > kSliceLimit)
            return std::nullopt;
        for (long c = 0; c <= U; ++c) {
            AffMap sl = slice_map(r, a, c);
            auto sub = restrict_y(r - 1, pull(g, sl));
            if (!sub)
                return std::nullopt;
            for (const auto& m : *sub)
                out.push_back(compose(sl, m));
        }
        return out;
    }
    // Mixed signs: need a unit coefficient so that g >= 0 reads y_a >= R.
    std::size_t a = r;
    for (std::size_t i = 0; i < r; ++i)
        if (g.w[i] == 1) {
            a = i;
            break;
        }
    if (a == r)
        return std::nullopt;
    AffineI R;
    R.c0 = -g.c0;
    R.w.resize(r);
    for (std::size_t i = 0; i < r; ++i)
        R.w[i] = i == a ? 0 : -g.w[i];
    auto upper = restrict_y(r, R);
    AffineI Rc = R;
    Rc.c0 = -R.c0 - 1;
    for (auto& x : Rc.w)
        x = -x;
    auto lower = restrict_y(r, Rc);
    if (!upper || !lower)
        return std::nullopt;
    for (const auto& m : *upper) {
        // Coordinate a passes through unchanged; find its image.
        std::size_t ap = m.cols();
        for (std::size_t k = 0; k < m.cols(); ++k)
            if (m.S[a][k] == 1) {
                ap = k;
                break;
            }
        if (ap == m.cols() || m.t[a] != 0)
            return std::nullopt;
        AffineI Rz = pull(R, m);
        if (Rz.w[ap] != 0)
            return std::nullopt;
        out.push_back(compose(m, subst_map(m.cols(), ap, Rz)));
    }
    for (auto& m : *lower)
        out.push_back(std::move(m));
    return out;
}

AffineI pull_cone(const AffineI& g, const Cone& c)
{
    AffMap m;
    m.t = c.v;
    m.S = c.W;
    if (m.S.empty())
        return AffineI{g.eval(c.v), {}};
    return pull(g, m);
}

QuadR pull_quad(const QuadR& q, const Cone& c)
{
    const std::size_t k = c.v.size(), r = c.rank();
    QuadR out(r);
    std::vector<AffineI> x(k);
    for (std::size_t i = 0; i < k; ++i) {
        x[i].c0 = c.v[i];
        x[i].w.assign(r, 0);
        for (std::size_t s = 0; s < r; ++s)
            x[i].w[s] = c.W[i][s];
    }
    out.c0 = q.c0;
    for (std::size_t i = 0; i < k; ++i)
        if (!q.l[i].is_zero())
            out.add_affine(x[i], q.l[i]);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
            if (!q.Q[i][j].is_zero())
                out.add_product(x[i], x[j], q.Q[i][j]);
    return out;
}

std::optional<std::vector<Cone>> restrict_cone(const Cone& c, const AffineI& g)
{
    AffineI gy = pull_cone(g, c);
    auto maps = restrict_y(c.rank(), gy);
    if (!maps)
        return std::nullopt;
    std::vector<Cone> out;
    for (const auto& m : *maps) {
        Cone n;
        n.relaxed = c.relaxed;
        const std::size_t k = c.v.size(), r = c.rank(), r2 = m.cols();
        n.v = c.v;
        n.W.assign(k, std::vector<long>(r2, 0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t s = 0; s < r; ++s) {
                long w = c.W[i][s];
                if (w == 0)
                    continue;
                n.v[i] += w * m.t[s];
                for (std::size_t z = 0; z < r2; ++z)
                    n.W[i][z] += w * m.S[s][z];
            }
        out.push_back(std::move(n));
    }
    return out;
}

AffineI negate_minus_one(const AffineI& g)
{
    AffineI r = g;
    r.c0 = -g.c0 - 1;
    for (auto& x : r.w)
        x = -x;
    return r;
}

AffineI plus(const AffineI& a, const AffineI& b, long kb)
{
    AffineI r = a;
    r.c0 += kb * b.c0;
    for (std::size_t i = 0; i < r.w.size(); ++i)
        r.w[i] += kb * b.w[i];
    return r;
}

struct Action {
    enum Type { Restrict, Split, CondRestrict } type;
    AffineI f, g;
};

std::vector<Cone> apply(const std::vector<Cone>& cones, const Action& act, bool& budget_hit)
{
    std::vector<Cone> out;
    for (const Cone& c : cones) {
        if (budget_hit || out.size() > kConeBudget) {
            budget_hit = true;
            Cone k = c;
            k.relaxed = true;
            out.push_back(std::move(k));
            continue;
        }
        switch (act.type) {
        case Action::Restrict: {
            auto r = restrict_cone(c, act.f);
            if (!r) {
                Cone k = c;
                k.relaxed = true;
                out.push_back(std::move(k));
            } else {
                for (auto& x : *r)
                    out.push_back(std::move(x));
            }
            break;
        }
        case Action::Split: {
            AffineI fy = pull_cone(act.f, c);
            if (nonneg_by_coeffs(fy) || nonpos_by_coeffs(fy)) {
                out.push_back(c);
                break;
            }
            auto a = restrict_cone(c, act.f);
            auto b = restrict_cone(c, negate_minus_one(act.f));
            if (!a || !b) {
                out.push_back(c);
                break;
            }
            for (auto& x : *a)
                out.push_back(std::move(x));
            for (auto& x : *b)
                out.push_back(std::move(x));
            break;
        }
        case Action::CondRestrict: {
            auto a = restrict_cone(c, act.f);
            auto b = restrict_cone(c, negate_minus_one(act.f));
            if (!a || !b) {
                Cone k = c;
                k.relaxed = true;
                out.push_back(std::move(k));
                break;
            }
            for (auto& x : *a) {
                auto r = restrict_cone(x, act.g);
                if (!r) {
                    x.relaxed = true;
                    out.push_back(std::move(x));
                } else {
                    for (auto& y : *r)
                        out.push_back(std::move(y));
                }
            }
            for (auto& x : *b)
                out.push_back(std::move(x));
            break;
        }
        }
    }
    return out;
}

// Lower bound of sigma * F_M(s) on a cone, s given in cone coordinates.
void add_defect_bound(QuadR& q, const AffineI& s, long M, int sigma, bool& relaxed)
{
    if (nonneg_by_coeffs(s))
        return;
    const bool nonpos = nonpos_by_coeffs(s);
    if (sigma < 0 && !nonpos) {
        relaxed = true; // -F(s) >= 0
        return;
    }
    const Rat Mr(M);
    if (M == 1) {
        // F(s) = -s(s-1)/2 for s <= 0; as a lower bound it holds everywhere.
        AffineI sm1 = s;
        sm1.c0 -= 1;
        q.add_product(s, sm1, Rat(-sigma, 2));
        return;
    }
    if (sigma > 0) {
        q.add_product(s, s, Rat(-1) / (Rat(2) * Mr));
        q.add_affine(s, Rat(1, 2));
        q.c0 -= Mr / Rat(8);
    } else {
        q.add_product(s, s, Rat(1) / (Rat(2) * Mr));
        q.add_affine(s, Rat(-1, 2));
    }
}

QuadR cone_bound(const TermShape& t, Cone& c)
{
    QuadR q = pull_quad(t.qexp, c);
    bool relaxed = c.relaxed;
    for (const auto& f : t.poch) {
        AffineI E = pull_cone(f.E, c);
        AffineI L = pull_cone(f.L, c);
        AffineI EL = plus(E, L, f.M);
        add_defect_bound(q, E, f.M, f.sign, relaxed);
        add_defect_bound(q, EL, f.M, -f.sign, relaxed);
    }
    for (const auto& d : t.declared) {
        AffineI L = pull_cone(d.L, c);
        q.add_product(L, L, d.abc[0]);
        q.add_affine(L, d.abc[1]);
        q.c0 += d.abc[2];
    }
    c.relaxed = relaxed;
    return q;
}

std::vector<Action> build_actions(const TermShape& t, bool split_all)
{
    std::vector<Action> acts;
    for (const auto& s : t.support)
        acts.push_back({Action::Restrict, s, {}});
    for (const auto& d : t.declared) {
        acts.push_back({Action::Restrict, d.L, {}});
        AffineI top = d.L;
        top.c0 = d.cap - top.c0;
        for (auto& x : top.w)
            x = -x;
        acts.push_back({Action::Restrict, top, {}});
    }
    for (const auto& f : t.poch) {
        if (f.sign > 0 && f.unit_one) {
            bool divisible = f.E.c0 % f.M == 0 &&
                             std::all_of(f.E.w.begin(), f.E.w.end(), [&](long x) { return x % f.M == 0; });
            if (divisible) {
                AffineI negE = f.E;
                negE.c0 = -negE.c0;
                for (auto& x : negE.w)
                    x = -x;
                AffineI EL = plus(f.E, f.L, f.M);
                AffineI negEL = EL;
                negEL.c0 = -negEL.c0;
                for (auto& x : negEL.w)
                    x = -x;
                acts.push_back({Action::CondRestrict, negE, negEL});
            }
        }
    }
    for (const auto& f : t.poch) {
        AffineI EL = plus(f.E, f.L, f.M);
        // sigma = +sign for E, -sign for E + M L
        for (auto [s, sigma] : {std::pair{f.E, f.sign}, std::pair{EL, -f.sign}}) {
            if (s.is_constant())
                continue;
            if (sigma > 0 && f.M == 1 && !split_all)
                continue;
            acts.push_back({Action::Split, s, {}});
        }
    }
    return acts;
}

std::string cone_text(const Cone& c, const std::vector<std::string>& names)
{
    std::string s;
    for (std::size_t i = 0; i < c.v.size(); ++i) {
        if (i)
            s += ", ";
        std::string e;
        for (std::size_t k = 0; k < c.rank(); ++k) {
            long w = c.W[i][k];
            if (w == 0)
                continue;
            std::string y = "y" + std::to_string(k);
            if (e.empty())
                e = w == 1 ? y : w == -1 ? "-" + y : std::to_string(w) + "*" + y;
            else
                e += (w < 0 ? " - " : " + ") + (std::labs(w) == 1 ? y : std::to_string(std::labs(w)) + "*" + y);
        }
        if (c.v[i] != 0 || e.empty())
            e += e.empty() ? std::to_string(c.v[i]) : (c.v[i] < 0 ? " - " : " + ") + std::to_string(std::labs(c.v[i]));
        s += names[i] + " = " + e;
    }
    return "{" + s + "}";
}

bool try_order(Cone& c, const std::vector<int>& order)
{
    const std::size_t r = order.size();
    std::vector<QuadR> level(r, QuadR(r));
    QuadR cur = c.bound;
    for (std::size_t i = r; i-- > 0;) {
        level[i] = cur;
        const std::size_t v = static_cast<std::size_t>(order[i]);
        const Rat a = cur.Q[v][v];
        AffR B;
        B.c0 = cur.l[v];
        B.l.assign(r, Rat(0));
        bool b_nonneg = B.c0.sign() >= 0;
        for (std::size_t u = 0; u < r; ++u) {
            if (u == v)
                continue;
            B.l[u] = u < v ? cur.Q[u][v] : cur.Q[v][u];
            if (B.l[u].sign() < 0)
                b_nonneg = false;
        }
        if (i == 0) {
            if (a.sign() > 0 || (a.is_zero() && B.c0.sign() > 0))
                break;
            return false;
        }
        QuadR next = cur;
        next.Q[v][v] = Rat(0);
        next.l[v] = Rat(0);
        for (std::size_t u = 0; u < r; ++u) {
            if (u < v)
                next.Q[u][v] = Rat(0);
            else if (u > v)
                next.Q[v][u] = Rat(0);
        }
        if (a.sign() > 0) {
            if (!b_nonneg)
                add_square(next, B, Rat(-1) / (Rat(4) * a));
        } else if (a.is_zero()) {
            if (!(b_nonneg && B.c0.sign() > 0))
                return false;
        } else {
            return false;
        }
        cur = next;
    }
    c.order = order;
    c.level = std::move(level);
    return true;
}

void enumerate_cone(const Cone& c, const Rat& N, std::size_t depth, std::vector<long>& y,
                    std::vector<std::vector<long>>& out)
{
    const std::size_t r = c.rank();
    if (depth == r) {
        if (c.bound.eval(y) <= N)
            out.push_back(c.point(y));
        return;
    }
    const std::size_t v = static_cast<std::size_t>(c.order[depth]);
    const QuadR& h = c.level[depth];
    for (long x = 0;; ++x) {
        if (x > kLoopLimit)
            fail(ErrorCode::NonCoercive, "enumeration did not terminate");
        y[v] = x;
        Rat hv = h.eval(y);
        if (hv <= N) {
            enumerate_cone(c, N, depth + 1, y, out);
            continue;
        }
        y[v] = x + 1;
        Rat hn = h.eval(y);
        y[v] = x;
        if (hn >= hv)
            break;
    }
    y[v] = 0;
}

} // namespace

// ---------------------------------------------------------------- QuadR

Rat QuadR::eval(const std::vector<long>& x) const
{
    Rat r = c0;
    for (std::size_t i = 0; i < l.size(); ++i)
        if (x[i] != 0 && !l[i].is_zero())
            r += l[i] * Rat(x[i]);
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (x[i] == 0)
            continue;
        for (std::size_t j = i; j < l.size(); ++j)
            if (x[j] != 0 && !Q[i][j].is_zero())
                r += Q[i][j] * Rat(x[i] * x[j]);
    }
    return r;
}

void QuadR::add_affine(const AffineI& a, const Rat& scale)
{
    c0 += scale * Rat(a.c0);
    for (std::size_t i = 0; i < a.w.size(); ++i)
        if (a.w[i] != 0)
            l[i] += scale * Rat(a.w[i]);
}

void QuadR::add_product(const AffineI& a, const AffineI& b, const Rat& scale)
{
    c0 += scale * Rat(a.c0 * b.c0);
    const std::size_t k = dim();
    for (std::size_t i = 0; i < k; ++i) {
        long li = a.c0 * b.w[i] + b.c0 * a.w[i];
        if (li != 0)
            l[i] += scale * Rat(li);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (a.w[i] == 0)
            continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (b.w[j] == 0)
                continue;
            std::size_t lo = std::min(i, j), hi = std::max(i, j);
            Q[lo][hi] += scale * Rat(a.w[i] * b.w[j]);
        }
    }
}

std::string QuadR::str(const std::vector<std::string>& names) const
{
    std::string out;
    auto term = [&](const Rat& c, const std::string& body) {
        if (c.is_zero())
            return;
        Rat a = c.abs();
        std::string t = body.empty() ? a.str() : (a.is_one() ? "" : a.str() + "*") + body;
        if (out.empty())
            out = c.sign() < 0 ? "-" + t : t;
        else
            out += (c.sign() < 0 ? " - " : " + ") + t;
    };
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i; j < dim(); ++j)
            term(Q[i][j], i == j ? names[i] + "^2" : names[i] + "*" + names[j]);
    for (std::size_t i = 0; i < dim(); ++i)
        term(l[i], names[i]);
    term(c0, "");
    return out.empty() ? "0" : out;
}

long defect(long s, long M)
{
    if (s >= 0)
        return 0;
    long K = (-s) / M;
    return (K + 1) * s + M * K * (K + 1) / 2;
}

std::optional<long> exact_valuation(const TermShape& t, const std::vector<long>& x)
{
    for (const auto& s : t.support)
        if (s.eval(x) < 0)
            return std::nullopt;
    Rat q = t.qexp.eval(x);
    if (!q.is_integer())
        fail(ErrorCode::GridMismatch, "summand exponent " + q.str() + " is off the grid");
    long val = q.num().get_si();
    bool zero = false;
    for (const auto& f : t.poch) {
        long E = f.E.eval(x), L = f.L.eval(x);
        if (f.unit_one) {
            // 1 - q^0 appears among the factors?
            bool hit = false;
            if (L >= 0) {
                if (E <= 0 && (-E) % f.M == 0 && (-E) / f.M < L)
                    hit = true;
            } else {
                if (E > 0 && E % f.M == 0 && E / f.M <= -L)
                    hit = true;
            }
            if (hit) {
                bool numerator = (f.sign > 0) == (L >= 0);
                // keep scanning, 0/0 is still a pole
                if (!numerator)
                    fail(ErrorCode::Pole, f.what + " has a vanishing denominator factor");
                zero = true;
                continue;
            }
        }
        val += f.sign * (defect(E, f.M) - defect(E + f.M * L, f.M));
    }
    if (zero)
        return std::nullopt;
    for (const auto& d : t.declared) {
        long L = d.L.eval(x);
        if (L < 0 || L > d.cap)
            return std::nullopt;
        Rat b = d.abc[0] * Rat(L * L) + d.abc[1] * Rat(L) + d.abc[2];
        val += b.ceil();
    }
    return val;
}

std::vector<long> Cone::point(const std::vector<long>& y) const
{
    std::vector<long> x = v;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t s = 0; s < y.size(); ++s)
            x[i] += W[i][s] * y[s];
    return x;
}

bool plan_cone(Cone& c)
{
    const std::size_t r = c.rank();
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    do {
        if (try_order(c, order))
            return true;
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
}

ValBound ValBound::from_quadratic(const std::vector<std::string>& names, const QuadR& q)
{
    ValBound b;
    b.names = names;
    Cone c;
    const std::size_t k = names.size();
    c.v.assign(k, 0);
    c.W.assign(k, std::vector<long>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        c.W[i][i] = 1;
    c.bound = q;
    if (!plan_cone(c))
        fail(ErrorCode::NonCoercive, "bound " + q.str(names) + " does not grow along every lattice direction");
    b.cones.push_back(std::move(c));
    return b;
}

void check_small_poles(const TermShape& t)
{
    const std::size_t k = t.dim();
    bool any = false;
    for (const auto& f : t.poch)
        any = any || f.unit_one;
    if (!any || k == 0)
        return;
    const long box = k <= 2 ? 12 : k == 3 ? 8 : k == 4 ? 5 : 3;
    std::vector<long> x(k, 0);
    while (true) {
        bool in = true;
        for (const auto& s : t.support)
            in = in && s.eval(x) >= 0;
        if (in) {
            for (const auto& f : t.poch) {
                if (!f.unit_one)
                    continue;
                long E = f.E.eval(x), L = f.L.eval(x);
                bool hit = L >= 0 ? (E <= 0 && (-E) % f.M == 0 && (-E) / f.M < L)
                                  : (E > 0 && E % f.M == 0 && E / f.M <= -L);
                if (hit && (f.sign > 0) != (L >= 0))
                    fail(ErrorCode::Pole, f.what + " has a vanishing denominator factor");
            }
        }
        std::size_t i = 0;
        while (i < k && ++x[i] > box)
            x[i++] = 0;
        if (i == k)
            return;
    }
}

ValBound val_lower_bound(const TermShape& t)
{
    check_small_poles(t);
    const std::size_t k = t.dim();
    Cone start;
    start.v.assign(k, 0);
    start.W.assign(k, std::vector<long>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        start.W[i][i] = 1;

    std::string failure;
    bool failure_relaxed = false;
    for (bool split_all : {false, true}) {
        std::vector<Cone> cones{start};
        bool budget_hit = false;
        for (const auto& act : build_actions(t, split_all))
            cones = apply(cones, act, budget_hit);
        ValBound b;
        b.names = t.names;
        bool ok = true;
        for (auto& c : cones) {
            c.bound = cone_bound(t, c);
            if (!plan_cone(c)) {
                ok = false;
                std::vector<std::string> ys;
                for (std::size_t s = 0; s < c.rank(); ++s)
                    ys.push_back("y" + std::to_string(s));
                failure = "valuation bound " + c.bound.str(ys) + " on cone " + cone_text(c, t.names) +
                          " does not grow along every direction";
                failure_relaxed = c.relaxed || budget_hit;
                break;
            }
            b.cones.push_back(std::move(c));
        }
        if (ok)
            return b;
    }
    fail(failure_relaxed ? ErrorCode::UnresolvedSign : ErrorCode::NonCoercive, failure);
}

std::vector<std::vector<long>> enumeration_domain(const ValBound& b, const Rat& N)
{
    std::vector<std::vector<long>> out;
    for (const auto& c : b.cones) {
        std::vector<long> y(c.rank(), 0);
        enumerate_cone(c, N, 0, y, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace qverify
