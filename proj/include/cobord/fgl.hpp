#pragma once

#include "series.hpp"

#include <memory>
#include <vector>

namespace cobord {

// One-dimensional formal group law over a graded base, tabulated as the
// coefficients a[i][j] of F(s,t) = sum a_ij s^i t^j for i + j <= order.
// |a_ij| = 2(i + j - 1), so a window with max_degree = 2D supports order D+1;
// `complete` marks laws whose dropped tail is genuinely zero in the window.
struct FormalGroupLaw {
    std::shared_ptr<const GradedBase> base;
    BaseKind kind;
    int order = 0;
    bool complete = false;
    std::vector<std::vector<BasePoly>> a;
    std::vector<BasePoly> logc, expc;  // univariate coefficients (rational kind)

    const BasePoly& coeff(int i, int j) const;
};

// Additive, Multiplicative, UniversalRational here; UniversalIntegral and
// ModPReduced are built from the rational law by the integral-generator pass.
FormalGroupLaw make_law(BaseKind kind, int max_degree, int order, long p = 0);

Series fgl_sum(const FormalGroupLaw& F, const Series& s, const Series& t);
Series fgl_iterated_sum(const FormalGroupLaw& F, const std::vector<Series>& terms);
Series fgl_n_series(const FormalGroupLaw& F, long n, const Series& s);
Series fgl_inverse(const FormalGroupLaw& F, const Series& s);
// sum_j a[i][j] u^j  (the x^i coefficient of F(x, u))
Series euler_coeff(const FormalGroupLaw& F, int i, const Series& u);

}  // namespace cobord
