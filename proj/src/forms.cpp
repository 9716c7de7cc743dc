#include "qverify/qexpr.hpp"

#include <numeric>

namespace qverify {

namespace {

void append_term(std::string& out, const Rat& c, const std::string& body)
{
    if (c.is_zero())
        return;
    bool neg = c.sign() < 0;
    Rat a = c.abs();
    std::string t = body.empty() ? a.str() : (a.is_one() ? "" : a.str() + "*") + body;
    if (out.empty())
        out = neg ? "-" + t : t;
    else
        out += (neg ? " - " : " + ") + t;
}

} // namespace

// ---------------------------------------------------------------- LinForm

LinForm LinForm::var(const std::string& v, long k)
{
    LinForm l;
    if (k != 0)
        l.w[v] = k;
    return l;
}

long LinForm::coeff(const std::string& v) const
{
    auto it = w.find(v);
    return it == w.end() ? 0 : it->second;
}

std::set<std::string> LinForm::vars() const
{
    std::set<std::string> s;
    for (const auto& [v, k] : w)
        s.insert(v);
    return s;
}

void LinForm::prune()
{
    std::erase_if(w, [](const auto& kv) { return kv.second == 0; });
}

LinForm& LinForm::operator+=(const LinForm& o)
{
    c0 += o.c0;
    for (const auto& [v, k] : o.w)
        w[v] += k;
    prune();
    return *this;
}

LinForm& LinForm::operator-=(const LinForm& o)
{
    c0 -= o.c0;
    for (const auto& [v, k] : o.w)
        w[v] -= k;
    prune();
    return *this;
}

LinForm& LinForm::operator*=(long k)
{
    c0 *= k;
    for (auto& [v, x] : w)
        x *= k;
    prune();
    return *this;
}

long LinForm::eval(const std::map<std::string, long>& at) const
{
    long r = c0;
    for (const auto& [v, k] : w) {
        auto it = at.find(v);
        if (it == at.end())
            fail(ErrorCode::UnboundIndex, "index '" + v + "' has no value");
        r += k * it->second;
    }
    return r;
}

std::string LinForm::str() const
{
    std::string out;
    for (const auto& [v, k] : w)
        append_term(out, Rat(k), v);
    append_term(out, Rat(c0), "");
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- QuadForm

QuadForm QuadForm::constant(const Rat& c)
{
    QuadForm q;
    q.c0 = c;
    return q;
}

QuadForm QuadForm::from_lin(const LinForm& l)
{
    QuadForm q;
    q.c0 = Rat(l.c0);
    for (const auto& [v, k] : l.w)
        q.lin[v] = Rat(k);
    return q;
}

std::set<std::string> QuadForm::vars() const
{
    std::set<std::string> s;
    for (const auto& [v, k] : lin)
        s.insert(v);
    for (const auto& [vv, k] : quad) {
        s.insert(vv.first);
        s.insert(vv.second);
    }
    return s;
}

void QuadForm::prune()
{
    std::erase_if(lin, [](const auto& kv) { return kv.second.is_zero(); });
    std::erase_if(quad, [](const auto& kv) { return kv.second.is_zero(); });
}

QuadForm& QuadForm::operator+=(const QuadForm& o)
{
    c0 += o.c0;
    for (const auto& [v, k] : o.lin)
        lin[v] += k;
    for (const auto& [v, k] : o.quad)
        quad[v] += k;
    prune();
    return *this;
}

QuadForm& QuadForm::operator-=(const QuadForm& o)
{
    QuadForm n = o;
    n *= Rat(-1);
    return *this += n;
}

QuadForm& QuadForm::operator*=(const Rat& k)
{
    c0 *= k;
    for (auto& [v, x] : lin)
        x *= k;
    for (auto& [v, x] : quad)
        x *= k;
    prune();
    return *this;
}

QuadForm QuadForm::product(const QuadForm& a, const QuadForm& b)
{
    if ((!a.quad.empty() && !b.is_constant()) || (!b.quad.empty() && !a.is_constant()))
        fail(ErrorCode::SyntaxError, "exponent is not quadratic");
    QuadForm r;
    r.c0 = a.c0 * b.c0;
    for (const auto& [v, k] : a.lin)
        r.lin[v] += k * b.c0;
    for (const auto& [v, k] : b.lin)
        r.lin[v] += k * a.c0;
    for (const auto& [v, k] : a.quad)
        r.quad[v] += k * b.c0;
    for (const auto& [v, k] : b.quad)
        r.quad[v] += k * a.c0;
    for (const auto& [va, ka] : a.lin)
        for (const auto& [vb, kb] : b.lin) {
            auto key = va <= vb ? std::make_pair(va, vb) : std::make_pair(vb, va);
            r.quad[key] += ka * kb;
        }
    r.prune();
    return r;
}

bool QuadForm::integer_valued() const
{
    if (!c0.is_integer())
        return false;
    for (const auto& [vv, k] : quad) {
        if (vv.first != vv.second) {
            if (!k.is_integer())
                return false;
        } else {
            if (!(k * Rat(2)).is_integer())
                return false;
            auto it = lin.find(vv.first);
            Rat l = it == lin.end() ? Rat(0) : it->second;
            if (!(k + l).is_integer())
                return false;
        }
    }
    for (const auto& [v, l] : lin) {
        if (quad.count({v, v}))
            continue;
        if (!l.is_integer())
            return false;
    }
    return true;
}

long QuadForm::grid_denominator() const
{
    if (integer_valued())
        return 1;
    long d = c0.den().get_si();
    for (const auto& [v, k] : lin)
        d = std::lcm(d, k.den().get_si());
    for (const auto& [v, k] : quad)
        d = std::lcm(d, k.den().get_si());
    // Halve where the diagonal parity rule already absorbs a factor 2.
    for (long cand = 1; cand <= d; ++cand) {
        if (d % cand != 0)
            continue;
        QuadForm s = *this;
        s *= Rat(cand);
        if (s.integer_valued())
            return cand;
    }
    return d;
}

Rat QuadForm::eval(const std::map<std::string, long>& at) const
{
    auto val = [&](const std::string& v) {
        auto it = at.find(v);
        if (it == at.end())
            fail(ErrorCode::UnboundIndex, "index '" + v + "' has no value");
        return it->second;
    };
    Rat r = c0;
    for (const auto& [v, k] : lin)
        r += k * Rat(val(v));
    for (const auto& [vv, k] : quad)
        r += k * Rat(val(vv.first) * val(vv.second));
    return r;
}

std::string QuadForm::str() const
{
    std::string out;
    for (const auto& [vv, k] : quad) {
        std::string body = vv.first == vv.second ? vv.first + "^2" : vv.first + "*" + vv.second;
        append_term(out, k, body);
    }
    for (const auto& [v, k] : lin)
        append_term(out, k, v);
    append_term(out, c0, "");
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- ParamMon

ParamMon ParamMon::constant(const Rat& c)
{
    ParamMon m;
    m.c = c;
    return m;
}

ParamMon ParamMon::param(const std::string& name, long k)
{
    ParamMon m;
    if (k != 0)
        m.powers[name] = k;
    return m;
}

ParamMon ParamMon::qpow(const QuadForm& e)
{
    ParamMon m;
    m.qexp = e;
    return m;
}

bool ParamMon::is_constant_one() const
{
    return c.is_one() && powers.empty() && qexp == QuadForm{};
}

void ParamMon::prune()
{
    std::erase_if(powers, [](const auto& kv) { return kv.second == 0; });
    qexp.prune();
}

ParamMon& ParamMon::operator*=(const ParamMon& o)
{
    c *= o.c;
    for (const auto& [p, k] : o.powers)
        powers[p] += k;
    qexp += o.qexp;
    prune();
    return *this;
}

ParamMon ParamMon::inverse() const
{
    ParamMon r;
    r.c = c.inverse();
    for (const auto& [p, k] : powers)
        r.powers[p] = -k;
    r.qexp = qexp * Rat(-1);
    return r;
}

ParamMon ParamMon::pow(long k) const
{
    ParamMon r;
    r.c = c.pow(k);
    for (const auto& [p, x] : powers)
        r.powers[p] = x * k;
    r.qexp = qexp * Rat(k);
    r.prune();
    return r;
}

std::string ParamMon::str() const
{
    std::vector<std::string> num, den;
    Rat a = c.abs();
    for (const auto& [p, k] : powers) {
        long e = k > 0 ? k : -k;
        std::string f = e == 1 ? p : p + "^" + std::to_string(e);
        (k > 0 ? num : den).push_back(f);
    }
    if (!qexp.is_constant() || !qexp.c0.is_zero()) {
        if (qexp == QuadForm::constant(Rat(1)))
            num.push_back("q");
        else
            num.push_back("q^(" + qexp.str() + ")");
    }
    std::string out;
    if (!a.is_one() || num.empty()) {
        out = a.num().get_str();
        if (!a.is_integer())
            den.insert(den.begin(), a.den().get_str());
        if (!a.is_integer() && num.empty() && den.size() == 1) {
            out = a.str();
            den.clear();
        }
    }
    for (const auto& f : num)
        out += (out.empty() ? "" : "*") + f;
    for (const auto& f : den)
        out += "/" + f;
    return c.sign() < 0 ? "-" + out : out;
}

} // namespace qverify
