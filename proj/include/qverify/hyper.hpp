#pragma once

#include <string>
#include <vector>

#include "qverify/engine.hpp"

namespace qverify {

/// Upper and lower parameters of an r-phi-s series in base q^m; r is the
/// number of upper parameters.
struct PhiSpec {
    std::vector<ParamMon> upper, lower;
    long m = 1;
    ParamMon arg;
};

/// f_{A,B,C}(q) = sum over n in N^r of q^(n.A.n/2 + B.n + C) / prod (q;q)_{n_i}.
struct NahmSpec {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> B;
    Rat C;
};

/// The phi series as an explicit Sum over the given fresh index.
ExprPtr phi_as_sum(const PhiSpec& spec, const std::string& index);
ExprPtr phi_as_sum(const Expr& phi, const std::string& index);

/// The Nahm sum as an explicit Sum over fresh indices prefix1, prefix2, ...
ExprPtr nahm_as_sum(const NahmSpec& spec, const std::string& prefix);

/// Raises NotPositiveDefinite unless A is symmetric with positive leading
/// principal minors.
void check_positive_definite(const std::vector<std::vector<Rat>>& A);

Series phi_eval(const PhiSpec& spec, const SubstEnv& env, const Rat& N);
Series nahm_eval(const NahmSpec& spec, const Rat& N);

} // namespace qverify
