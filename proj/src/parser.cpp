#include "qverify/qexpr.hpp"

#include <cctype>

namespace qverify {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

const std::set<std::string> kReserved = {"q",   "sum", "poch", "poch_inf", "invpochq", "tau", "tau_p",
                                         "qbinom", "phi", "nahm", "A",    "tcoeff"};

class Parser {
public:
    Parser(const std::string& text, const ParseOptions& opts) : opts_(opts)
    {
        lex(text);
        bound_.push_back(opts.bound);
    }

    ExprPtr parse_all()
    {
        ExprPtr e = expr();
        if (peek().kind != Tok::End)
            error(peek(), "unexpected '" + peek().text + "'");
        return e;
    }

private:
    const ParseOptions& opts_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::set<std::string>> bound_;

    [[noreturn]] void error(const Token& t, const std::string& msg, ErrorCode code = ErrorCode::SyntaxError) const
    {
        fail(code, "line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + msg);
    }

    void lex(const std::string& s)
    {
        int line = 1, col = 1;
        std::size_t i = 0;
        auto advance = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (s[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
                ++i;
            }
        };
        while (i < s.size()) {
            char ch = s[i];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                advance(1);
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                    ++j;
                t.kind = Tok::Ident;
                t.text = s.substr(i, j - i);
                advance(j - i);
            } else if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                    ++j;
                t.kind = Tok::Int;
                t.text = s.substr(i, j - i);
                advance(j - i);
            } else if (ch == '>' && i + 1 < s.size() && s[i + 1] == '=') {
                t.kind = Tok::Sym;
                t.text = ">=";
                advance(2);
            } else if (std::string("+-*/^()[],;").find(ch) != std::string::npos) {
                t.kind = Tok::Sym;
                t.text = std::string(1, ch);
                advance(1);
            } else {
                Token bad;
                bad.line = line;
                bad.col = col;
                error(bad, std::string("unexpected character '") + ch + "'");
            }
            toks_.push_back(t);
        }
        Token end;
        end.line = line;
        end.col = col;
        end.text = "end of input";
        toks_.push_back(end);
    }

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(const std::string& sym) const { return peek().kind == Tok::Sym && peek().text == sym; }
    bool at_ident(const std::string& name) const { return peek().kind == Tok::Ident && peek().text == name; }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    void expect(const std::string& sym)
    {
        if (!at(sym))
            error(peek(), "expected '" + sym + "' but found '" + peek().text + "'");
        next();
    }

    bool is_bound(const std::string& name) const { return bound_.back().count(name) > 0; }

    void check_param(const Token& t) const
    {
        if (kReserved.count(t.text))
            error(t, "'" + t.text + "' cannot be used as a parameter");
        if (is_bound(t.text))
            error(t, "index '" + t.text + "' cannot be used as a factor; write q^(" + t.text + ")");
        if (opts_.params && !opts_.params->count(t.text))
            error(t, "unknown parameter '" + t.text + "'", ErrorCode::UnknownParameter);
    }

    long integer()
    {
        bool neg = false;
        if (at("-")) {
            next();
            neg = true;
        }
        if (peek().kind != Tok::Int)
            error(peek(), "expected an integer but found '" + peek().text + "'");
        Token t = next();
        long v = std::stol(t.text);
        return neg ? -v : v;
    }

    Rat rational()
    {
        long n = integer();
        if (at("/")) {
            next();
            Token t = peek();
            long d = integer();
            if (d == 0)
                error(t, "zero denominator");
            return Rat(n, d);
        }
        return Rat(n);
    }

    // ---------------------------------------------------------- polynomials

    QuadForm poly_expr()
    {
        bool neg = false;
        if (at("-") || at("+"))
            neg = next().text == "-";
        QuadForm r = poly_term();
        if (neg)
            r *= Rat(-1);
        while (at("+") || at("-")) {
            bool minus = next().text == "-";
            QuadForm t = poly_term();
            if (minus)
                r -= t;
            else
                r += t;
        }
        return r;
    }

    QuadForm poly_term()
    {
        QuadForm r = poly_factor();
        while (at("*") || at("/")) {
            bool div = next().text == "/";
            Token t = peek();
            QuadForm f = poly_factor();
            if (div) {
                if (!f.is_constant() || f.c0.is_zero())
                    error(t, "exponents may only be divided by a nonzero constant");
                r *= f.c0.inverse();
            } else {
                try {
                    r = QuadForm::product(r, f);
                } catch (const Error&) {
                    error(t, "exponent is not quadratic");
                }
            }
        }
        return r;
    }

    QuadForm poly_factor()
    {
        Token t = peek();
        QuadForm base;
        if (at("(")) {
            next();
            base = poly_expr();
            expect(")");
        } else if (t.kind == Tok::Int) {
            next();
            base = QuadForm::constant(Rat(std::stol(t.text)));
        } else if (t.kind == Tok::Ident) {
            next();
            if (!is_bound(t.text)) {
                if (opts_.params && opts_.params->count(t.text))
                    error(t, "parameter '" + t.text + "' cannot appear in an exponent");
                error(t, "unbound index '" + t.text + "'", ErrorCode::UnboundIndex);
            }
            base = QuadForm::from_lin(LinForm::var(t.text));
        } else if (at("-")) {
            next();
            base = poly_factor();
            base *= Rat(-1);
            return base;
        } else {
            error(t, "expected an exponent term but found '" + t.text + "'");
        }
        if (at("^")) {
            next();
            Token pt = peek();
            if (pt.kind != Tok::Int)
                error(pt, "exponent powers must be nonnegative integers");
            next();
            long k = std::stol(pt.text);
            QuadForm r = QuadForm::constant(Rat(1));
            for (long i = 0; i < k; ++i) {
                try {
                    r = QuadForm::product(r, base);
                } catch (const Error&) {
                    error(pt, "exponent is not quadratic");
                }
            }
            return r;
        }
        return base;
    }

    LinForm lin_form()
    {
        Token t = peek();
        QuadForm q = poly_expr();
        return to_lin(q, t);
    }

    LinForm to_lin(const QuadForm& q, const Token& t) const
    {
        if (!q.is_linear() || !q.c0.is_integer())
            error(t, "expected an integer linear form");
        LinForm l = LinForm::constant(q.c0.num().get_si());
        for (const auto& [v, k] : q.lin) {
            if (!k.is_integer())
                error(t, "expected an integer linear form");
            l += LinForm::var(v, k.num().get_si());
        }
        return l;
    }

    // Exponent after '^': '(' form ')' | int | ident.
    QuadForm power_exponent()
    {
        Token t = peek();
        if (at("(")) {
            next();
            QuadForm q = poly_expr();
            expect(")");
            return q;
        }
        if (t.kind == Tok::Int || at("-")) {
            return QuadForm::constant(Rat(integer()));
        }
        if (t.kind == Tok::Ident) {
            next();
            if (!is_bound(t.text))
                error(t, "unbound index '" + t.text + "'", ErrorCode::UnboundIndex);
            return QuadForm::from_lin(LinForm::var(t.text));
        }
        error(t, "expected an exponent after '^'");
    }

    // ---------------------------------------------------------- monomials

    ParamMon base_factor()
    {
        Token t = peek();
        if (t.kind == Tok::Int) {
            next();
            return ParamMon::constant(Rat(std::stol(t.text)));
        }
        if (at("(")) {
            next();
            ParamMon m = base_mon();
            expect(")");
            return m;
        }
        if (t.kind != Tok::Ident)
            error(t, "expected a monomial but found '" + t.text + "'");
        next();
        if (t.text == "q") {
            if (at("^")) {
                next();
                return ParamMon::qpow(power_exponent());
            }
            return ParamMon::qpow(QuadForm::constant(Rat(1)));
        }
        check_param(t);
        long k = 1;
        if (at("^")) {
            next();
            Token et = peek();
            QuadForm e = power_exponent();
            if (!e.is_constant() || !e.c0.is_integer())
                error(et, "parameter powers inside a base must be integers");
            k = e.c0.num().get_si();
        }
        return ParamMon::param(t.text, k);
    }

    ParamMon base_mon()
    {
        bool neg = false;
        if (at("-")) {
            next();
            neg = true;
        }
        ParamMon m = base_factor();
        while (at("*") || at("/")) {
            bool div = next().text == "/";
            Token t = peek();
            ParamMon f = base_factor();
            if (div) {
                if (f.c.is_zero())
                    error(t, "division by zero");
                m *= f.inverse();
            } else {
                m *= f;
            }
        }
        if (neg)
            m.c = -m.c;
        m.prune();
        return m;
    }

    std::vector<ParamMon> mon_list(const std::vector<std::string>& stops)
    {
        std::vector<ParamMon> out;
        for (const auto& s : stops)
            if (at(s))
                return out;
        out.push_back(base_mon());
        while (at(",")) {
            next();
            out.push_back(base_mon());
        }
        return out;
    }

    // ---------------------------------------------------------- expressions

    ExprPtr expr()
    {
        std::vector<ExprPtr> terms;
        bool neg = false;
        if (at("-") || at("+"))
            neg = next().text == "-";
        ExprPtr t = term();
        terms.push_back(neg ? mk_neg(t) : t);
        while (at("+") || at("-")) {
            bool minus = next().text == "-";
            ExprPtr u = term();
            terms.push_back(minus ? mk_neg(u) : u);
        }
        return mk_add(terms);
    }

    ExprPtr term()
    {
        std::vector<ExprPtr> num, den;
        bool in_den = false;
        while (true) {
            bool is_sum = at_ident("sum");
            ExprPtr f = factor();
            (in_den ? den : num).push_back(f);
            if (is_sum)
                break;
            if (at("*")) {
                next();
                in_den = false;
            } else if (at("/")) {
                next();
                in_den = true;
            } else {
                break;
            }
        }
        return mk_term(num, den);
    }

    ExprPtr paren_or_pow()
    {
        Token open = peek();
        expect("(");
        ExprPtr inner = expr();
        expect(")");
        if (!at("^"))
            return inner;
        next();
        Token et = peek();
        QuadForm e = power_exponent();
        LinForm l = to_lin(e, et);
        ParamMon base;
        if (inner->kind == Kind::Mon) {
            base = inner->mon;
        } else if (inner->kind == Kind::Neg && inner->kids[0]->kind == Kind::Mon) {
            base = inner->kids[0]->mon;
            base.c = -base.c;
        } else {
            error(open, "only a monomial can be raised to a power");
        }
        if (base.c.is_zero() && (!l.is_constant() || l.c0 <= 0))
            error(open, "zero raised to a non-positive power");
        return mk_pow(base, l);
    }

    std::vector<std::string> sum_indices()
    {
        expect("(");
        std::vector<std::string> idx;
        while (true) {
            Token t = peek();
            if (t.kind != Tok::Ident)
                error(t, "expected an index name");
            next();
            if (kReserved.count(t.text))
                error(t, "'" + t.text + "' cannot be an index");
            if (is_bound(t.text) || std::find(idx.begin(), idx.end(), t.text) != idx.end())
                error(t, "index '" + t.text + "' is already bound");
            if (opts_.params && opts_.params->count(t.text))
                error(t, "index '" + t.text + "' shadows a parameter");
            expect(">=");
            Token z = peek();
            if (z.kind != Tok::Int || z.text != "0")
                error(z, "summation indices start at 0");
            next();
            idx.push_back(t.text);
            if (at(",")) {
                next();
                continue;
            }
            break;
        }
        expect(")");
        return idx;
    }

    long optional_base_power()
    {
        if (!at(";"))
            return 1;
        next();
        Token t = peek();
        long m = integer();
        if (m < 1)
            error(t, "base power must be positive");
        return m;
    }

    std::vector<std::vector<Rat>> matrix()
    {
        expect("[");
        std::vector<std::vector<Rat>> rows;
        if (at("[")) {
            while (true) {
                expect("[");
                std::vector<Rat> row{rational()};
                while (at(",")) {
                    next();
                    row.push_back(rational());
                }
                expect("]");
                rows.push_back(row);
                if (!at(","))
                    break;
                next();
            }
        } else {
            // "[2]" is accepted as the 1 x 1 matrix [[2]].
            rows.push_back({rational()});
        }
        expect("]");
        return rows;
    }

    std::vector<Rat> vector()
    {
        expect("[");
        std::vector<Rat> v{rational()};
        while (at(",")) {
            next();
            v.push_back(rational());
        }
        expect("]");
        return v;
    }

    ExprPtr factor()
    {
        Token t = peek();
        if (at("("))
            return paren_or_pow();
        if (t.kind == Tok::Int) {
            next();
            return mk_const(Rat(std::stol(t.text)));
        }
        if (t.kind != Tok::Ident)
            error(t, "unexpected '" + t.text + "'");
        const std::string& w = t.text;
        if (w == "q") {
            next();
            if (at("^")) {
                next();
                return mk_mon(ParamMon::qpow(power_exponent()));
            }
            return mk_mon(ParamMon::qpow(QuadForm::constant(Rat(1))));
        }
        if (w == "sum" && peek(1).kind == Tok::Sym && peek(1).text == "(") {
            next();
            std::vector<std::string> idx = sum_indices();
            std::set<std::string> inner = bound_.back();
            inner.insert(idx.begin(), idx.end());
            bound_.push_back(inner);
            ExprPtr body = term();
            bound_.pop_back();
            return mk_sum(idx, body);
        }
        if (w == "poch" || w == "poch_inf") {
            next();
            expect("(");
            std::vector<ParamMon> bases{base_mon()};
            while (at(",")) {
                next();
                bases.push_back(base_mon());
            }
            std::vector<ExprPtr> fs;
            if (w == "poch") {
                expect(";");
                LinForm n = lin_form();
                long m = optional_base_power();
                for (const auto& b : bases)
                    fs.push_back(mk_poch(b, n, m));
            } else {
                long m = optional_base_power();
                for (const auto& b : bases)
                    fs.push_back(mk_poch_inf(b, m));
            }
            expect(")");
            return fs.size() == 1 ? fs[0] : mk_term(fs);
        }
        if (w == "invpochq" || w == "tau" || w == "A") {
            next();
            expect("(");
            LinForm n = lin_form();
            expect(")");
            if (w == "invpochq")
                return mk_invpochq(n);
            if (w == "tau")
                return mk_tau(1, n);
            return mk_seqref(n);
        }
        if (w == "tau_p") {
            next();
            expect("(");
            Token pt = peek();
            long p = integer();
            if (p < 0)
                error(pt, "tau_p needs p >= 0");
            expect(";");
            LinForm n = lin_form();
            expect(")");
            return mk_tau(p, n);
        }
        if (w == "qbinom") {
            next();
            expect("(");
            LinForm n = lin_form();
            expect(",");
            LinForm k = lin_form();
            long m = optional_base_power();
            expect(")");
            return mk_qbinom(n, k, m);
        }
        if (w == "phi") {
            next();
            expect("(");
            auto up = mon_list({";"});
            expect(";");
            auto lo = mon_list({";"});
            expect(";");
            Token mt = peek();
            long m = integer();
            if (m < 1)
                error(mt, "base power must be positive");
            expect(";");
            ParamMon arg = base_mon();
            expect(")");
            if (up.empty())
                error(t, "phi needs at least one upper parameter");
            return mk_phi(up, lo, m, arg);
        }
        if (w == "nahm") {
            next();
            expect("(");
            auto A = matrix();
            expect(";");
            auto B = vector();
            expect(";");
            Rat C = rational();
            expect(")");
            return mk_nahm(A, B, C);
        }
        if (w == "tcoeff") {
            next();
            expect("(");
            LinForm n = lin_form();
            expect(";");
            Token s = peek();
            if (s.kind != Tok::Ident)
                error(s, "expected a parameter name");
            next();
            check_param(s);
            expect(";");
            ExprPtr body = expr();
            expect(")");
            return mk_tcoeff(n, s.text, body);
        }
        // parameter
        next();
        check_param(t);
        if (at("^")) {
            next();
            Token et = peek();
            QuadForm e = power_exponent();
            LinForm l = to_lin(e, et);
            return mk_pow(ParamMon::param(w), l);
        }
        return mk_mon(ParamMon::param(w));
    }
};

} // namespace

ExprPtr parse(const std::string& text, const ParseOptions& opts)
{
    Parser p(text, opts);
    return p.parse_all();
}

} // namespace qverify
