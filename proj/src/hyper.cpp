#include "qverify/hyper.hpp"

namespace qverify {

ExprPtr phi_as_sum(const PhiSpec& spec, const std::string& index)
{
    const LinForm n = LinForm::var(index);
    const long r = static_cast<long>(spec.upper.size());
    const long s = static_cast<long>(spec.lower.size());
    const long p = s + 1 - r;
    std::vector<ExprPtr> num, den;
    for (const auto& a : spec.upper)
        num.push_back(mk_poch(a, n, spec.m));
    for (const auto& b : spec.lower)
        den.push_back(mk_poch(b, n, spec.m));
    den.push_back(mk_poch(ParamMon::qpow(QuadForm::constant(Rat(spec.m))), n, spec.m));
    // tau_m(n)^p = (-1)^(p n) q^(p m n(n-1)/2)
    if (p != 0) {
        QuadForm nn = QuadForm::product(QuadForm::from_lin(n), QuadForm::from_lin(n - LinForm::constant(1)));
        num.push_back(mk_mon(ParamMon::qpow(nn * Rat(p * spec.m, 2))));
        if (p % 2 != 0)
            num.push_back(mk_pow(ParamMon::constant(Rat(-1)), n));
    }
    num.push_back(mk_pow(spec.arg, n));
    return mk_sum({index}, mk_term(num, den));
}

ExprPtr phi_as_sum(const Expr& phi, const std::string& index)
{
    PhiSpec spec{phi.upper, phi.lower, phi.m, phi.mon};
    return phi_as_sum(spec, index);
}

ExprPtr nahm_as_sum(const NahmSpec& spec, const std::string& prefix)
{
    const std::size_t r = spec.B.size();
    std::vector<std::string> idx;
    for (std::size_t i = 0; i < r; ++i)
        idx.push_back(prefix + std::to_string(i + 1));
    QuadForm e = QuadForm::constant(spec.C);
    for (std::size_t i = 0; i < r; ++i) {
        e += QuadForm::from_lin(LinForm::var(idx[i])) * spec.B[i];
        for (std::size_t j = 0; j < r; ++j) {
            QuadForm prod = QuadForm::product(QuadForm::from_lin(LinForm::var(idx[i])),
                                              QuadForm::from_lin(LinForm::var(idx[j])));
            e += prod * (spec.A[i][j] / Rat(2));
        }
    }
    std::vector<ExprPtr> num{mk_mon(ParamMon::qpow(e))}, den;
    for (const auto& v : idx)
        den.push_back(mk_poch(ParamMon::qpow(QuadForm::constant(Rat(1))), LinForm::var(v)));
    return mk_sum(idx, mk_term(num, den));
}

void check_positive_definite(const std::vector<std::vector<Rat>>& A)
{
    const std::size_t r = A.size();
    for (const auto& row : A)
        if (row.size() != r)
            fail(ErrorCode::NotPositiveDefinite, "matrix is not square");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (A[i][j] != A[j][i])
                fail(ErrorCode::NotPositiveDefinite, "matrix is not symmetric");
    // Leading principal minors by fraction-exact elimination.
    std::vector<std::vector<Rat>> M = A;
    for (std::size_t k = 0; k < r; ++k) {
        if (M[k][k].sign() <= 0)
            fail(ErrorCode::NotPositiveDefinite, "leading principal minor " + std::to_string(k + 1) + " is not positive");
        for (std::size_t i = k + 1; i < r; ++i) {
            Rat f = M[i][k] / M[k][k];
            for (std::size_t j = k; j < r; ++j)
                M[i][j] -= f * M[k][j];
        }
    }
}

Series phi_eval(const PhiSpec& spec, const SubstEnv& env, const Rat& N)
{
    return eval(mk_phi(spec.upper, spec.lower, spec.m, spec.arg), env, N);
}

Series nahm_eval(const NahmSpec& spec, const Rat& N)
{
    check_positive_definite(spec.A);
    return eval(mk_nahm(spec.A, spec.B, spec.C), SubstEnv{}, N);
}

} // namespace qverify
