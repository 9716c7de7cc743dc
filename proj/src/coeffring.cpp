#include "qverify/coeffring.hpp"

#include <algorithm>
#include <cctype>

namespace qverify {

std::string_view error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::IndeterminateValuation: return "IndeterminateValuation";
    case ErrorCode::Pole: return "Pole";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnboundIndex: return "UnboundIndex";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::UnresolvedSign: return "UnresolvedSign";
    case ErrorCode::NonCoercive: return "NonCoercive";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::ExhaustedSampler: return "ExhaustedSampler";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Rat::Rat(const mpz_class& num, const mpz_class& den)
{
    if (den == 0)
        fail(ErrorCode::NotAUnit, "rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rat::Rat(long num, long den) : Rat(mpz_class(num), mpz_class(den)) {}

Rat Rat::parse(std::string_view text)
{
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
    auto valid_int = [](std::string_view t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size())
            return false;
        return std::all_of(t.begin() + static_cast<long>(i), t.end(), [](unsigned char ch) { return std::isdigit(ch); });
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        fail(ErrorCode::SyntaxError, "malformed rational '" + std::string(text) + "'");
    if (num[0] == '+')
        num.erase(0, 1);
    if (den[0] == '+')
        den.erase(0, 1);
    return Rat(mpz_class(num), mpz_class(den));
}

Rat& Rat::operator/=(const Rat& o)
{
    if (o.is_zero())
        fail(ErrorCode::NotAUnit, "division by zero");
    v_ /= o.v_;
    return *this;
}

Rat Rat::inverse() const
{
    if (is_zero())
        fail(ErrorCode::NotAUnit, "0 has no inverse");
    return Rat(mpq_class(1) / v_);
}

Rat Rat::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rat(n, d);
}

long Rat::floor() const
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q.get_si();
}

long Rat::ceil() const
{
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q.get_si();
}

std::string Rat::str() const
{
    if (v_.get_den() == 1)
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::size_t Rat::hash() const
{
    auto h1 = std::hash<std::string>{}(v_.get_num().get_str(16));
    auto h2 = mpz_get_ui(v_.get_den_mpz_t());
    return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL);
}

Rat coeff_invert(const Rat& r)
{
    return r.inverse();
}

Rat coeff_add(const Rat& a, const Rat& b)
{
    return a + b;
}

Rat coeff_mul(const Rat& a, const Rat& b)
{
    return a * b;
}

// ---------------------------------------------------------------------------

PolyCoeff::PolyCoeff(int cap, const Rat& constant) : cap_(cap), c_(static_cast<std::size_t>(cap) + 1)
{
    if (cap < 0)
        fail(ErrorCode::Precondition, "polynomial cap must be nonnegative");
    c_[0] = constant;
}

PolyCoeff::PolyCoeff(int cap, std::vector<Rat> coeffs) : cap_(cap), c_(std::move(coeffs))
{
    if (cap < 0)
        fail(ErrorCode::Precondition, "polynomial cap must be nonnegative");
    c_.resize(static_cast<std::size_t>(cap) + 1);
}

PolyCoeff PolyCoeff::monomial(int cap, const Rat& c, int degree)
{
    PolyCoeff p(cap, Rat(0));
    if (degree >= 0 && degree <= cap)
        p.c_[static_cast<std::size_t>(degree)] = c;
    return p;
}

bool PolyCoeff::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Rat& r) { return r.is_zero(); });
}

bool PolyCoeff::is_one() const
{
    if (!c_[0].is_one())
        return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rat& r) { return r.is_zero(); });
}

int PolyCoeff::low_degree() const
{
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (!c_[k].is_zero())
            return static_cast<int>(k);
    return -1;
}

void PolyCoeff::check_mode(const PolyCoeff& o) const
{
    if (cap_ != o.cap_)
        fail(ErrorCode::ModeMismatch,
             "polynomial caps differ (" + std::to_string(cap_) + " vs " + std::to_string(o.cap_) + ")");
}

PolyCoeff PolyCoeff::inverse() const
{
    if (!is_unit())
        fail(ErrorCode::NotAUnit, "polynomial " + str() + " has zero constant term");
    PolyCoeff r(cap_, Rat(0));
    Rat inv0 = c_[0].inverse();
    r.c_[0] = inv0;
    for (int n = 1; n <= cap_; ++n) {
        Rat acc;
        for (int k = 1; k <= n; ++k)
            acc += c_[static_cast<std::size_t>(k)] * r.c_[static_cast<std::size_t>(n - k)];
        r.c_[static_cast<std::size_t>(n)] = -acc * inv0;
    }
    return r;
}

PolyCoeff& PolyCoeff::operator+=(const PolyCoeff& o)
{
    check_mode(o);
    for (std::size_t k = 0; k < c_.size(); ++k)
        c_[k] += o.c_[k];
    return *this;
}

PolyCoeff& PolyCoeff::operator-=(const PolyCoeff& o)
{
    check_mode(o);
    for (std::size_t k = 0; k < c_.size(); ++k)
        c_[k] -= o.c_[k];
    return *this;
}

PolyCoeff& PolyCoeff::operator*=(const PolyCoeff& o)
{
    *this = *this * o;
    return *this;
}

PolyCoeff& PolyCoeff::operator*=(const Rat& s)
{
    for (auto& c : c_)
        c *= s;
    return *this;
}

PolyCoeff operator*(const PolyCoeff& a, const PolyCoeff& b)
{
    a.check_mode(b);
    PolyCoeff r(a.cap_, Rat(0));
    for (int i = 0; i <= a.cap_; ++i) {
        const Rat& ai = a.c_[static_cast<std::size_t>(i)];
        if (ai.is_zero())
            continue;
        for (int j = 0; i + j <= a.cap_; ++j) {
            const Rat& bj = b.c_[static_cast<std::size_t>(j)];
            if (!bj.is_zero())
                r.c_[static_cast<std::size_t>(i + j)] += ai * bj;
        }
    }
    return r;
}

PolyCoeff operator-(const PolyCoeff& a)
{
    PolyCoeff r = a;
    for (auto& c : r.c_)
        c = -c;
    return r;
}

bool operator==(const PolyCoeff& a, const PolyCoeff& b)
{
    return a.cap_ == b.cap_ && a.c_ == b.c_;
}

std::string PolyCoeff::str() const
{
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero())
            continue;
        std::string term;
        if (k == 0)
            term = c_[k].str();
        else if (c_[k].is_one())
            term = "u";
        else if (c_[k] == Rat(-1))
            term = "-u";
        else
            term = c_[k].str() + "*u";
        if (k > 1)
            term += "^" + std::to_string(k);
        if (out.empty())
            out = term;
        else if (term[0] == '-')
            out += " - " + term.substr(1);
        else
            out += " + " + term;
    }
    return out.empty() ? "0" : out;
}

PolyCoeff coeff_invert(const PolyCoeff& p)
{
    return p.inverse();
}

PolyCoeff coeff_add(const PolyCoeff& a, const PolyCoeff& b)
{
    return a + b;
}

PolyCoeff coeff_mul(const PolyCoeff& a, const PolyCoeff& b)
{
    return a * b;
}

} // namespace qverify
