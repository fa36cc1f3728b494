#include "cobord/fgl.hpp"

#include "cobord/lazard.hpp"

#include <stdexcept>

namespace cobord {

namespace {

// univariate polynomials over the base, index = power, truncated at `order`
using UPoly = std::vector<BasePoly>;

UPoly upoly_mul(const GradedBase& b, const UPoly& x, const UPoly& y, int order) {
    UPoly r(order + 1);
    for (int i = 0; i <= order; ++i) r[i] = BasePoly{};
    for (int i = 0; i < (int)x.size() && i <= order; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < (int)y.size() && i + j <= order; ++j) {
            if (y[j].is_zero()) continue;
            r[i + j] = bp_add(b, r[i + j], bp_mul(b, x[i], y[j]));
        }
    }
    return r;
}

// bivariate, entries for i + j <= order
using BPoly2 = std::vector<std::vector<BasePoly>>;

BPoly2 bpoly2_zero(int order) {
    BPoly2 r(order + 1);
    for (int i = 0; i <= order; ++i) r[i].assign(order + 1 - i, BasePoly{});
    return r;
}

BPoly2 bpoly2_mul(const GradedBase& b, const BPoly2& x, const BPoly2& y, int order) {
    BPoly2 r = bpoly2_zero(order);
    for (int i1 = 0; i1 <= order; ++i1)
        for (int j1 = 0; i1 + j1 <= order; ++j1) {
            if (x[i1][j1].is_zero()) continue;
            for (int i2 = 0; i1 + i2 <= order; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= order; ++j2) {
                    if (y[i2][j2].is_zero()) continue;
                    r[i1 + i2][j1 + j2] =
                        bp_add(b, r[i1 + i2][j1 + j2], bp_mul(b, x[i1][j1], y[i2][j2]));
                }
        }
    return r;
}

}  // namespace

const BasePoly& FormalGroupLaw::coeff(int i, int j) const {
    static const BasePoly zero{};
    if (i < 0 || j < 0 || i + j > order) return zero;
    return a[i][j];
}

FormalGroupLaw make_law(BaseKind kind, int max_degree, int order, long p) {
    if (order < 1) throw std::invalid_argument("make_law: order must be positive");
    if (kind == BaseKind::UniversalIntegral || kind == BaseKind::ModPReduced)
        return make_integral_law(max_degree, order, p);

    FormalGroupLaw F;
    F.kind = kind;
    F.order = order;
    F.base = make_base(kind, max_degree, p);
    const GradedBase& b = *F.base;
    F.a.assign(order + 1, {});
    for (int i = 0; i <= order; ++i) F.a[i].assign(order + 1 - i, BasePoly{});
    F.a[1][0] = bp_const(b, 1);
    F.a[0][1] = bp_const(b, 1);

    switch (kind) {
        case BaseKind::Additive:
            F.complete = true;
            return F;
        case BaseKind::Multiplicative:
            if (order >= 2) F.a[1][1] = bp_gen(b, 0);
            else throw std::invalid_argument("make_law: multiplicative law needs order >= 2");
            if (max_degree < 2)
                throw std::invalid_argument("make_law: multiplicative law needs max_degree >= 2");
            F.complete = true;
            return F;
        case BaseKind::UniversalRational:
            break;
        default:
            throw std::invalid_argument("make_law: unsupported kind here");
    }

    int d = max_degree / 2;
    if (order > d + 1)
        throw std::invalid_argument(
            "make_law: order exceeds what the degree window supports (need order <= max_degree/2 + 1)");
    F.complete = (order == d + 1);

    // log(x) = x + sum_{i>=1} m_i x^{i+1}
    F.logc.assign(order + 1, BasePoly{});
    F.logc[1] = bp_const(b, 1);
    for (int k = 2; k <= order; ++k) F.logc[k] = bp_gen(b, k - 2);

    // exp = compositional inverse: exp(x) = x - sum_{j>=2} logc[j] exp(x)^j
    F.expc.assign(order + 1, BasePoly{});
    F.expc[1] = bp_const(b, 1);
    for (int k = 2; k <= order; ++k) {
        UPoly e(F.expc.begin(), F.expc.begin() + k);  // known coefficients < k
        UPoly pw = e;
        BasePoly acc;
        for (int j = 2; j <= k; ++j) {
            pw = upoly_mul(b, pw, e, k);
            if (!F.logc[j].is_zero() && (int)pw.size() > k && !pw[k].is_zero())
                acc = bp_add(b, acc, bp_mul(b, F.logc[j], pw[k]));
        }
        F.expc[k] = bp_neg(b, acc);
    }

    // F(x,y) = exp(log x + log y)
    BPoly2 u = bpoly2_zero(order);
    for (int k = 1; k <= order; ++k) {
        u[k][0] = F.logc[k];
        u[0][k] = F.logc[k];
    }
    BPoly2 acc = bpoly2_zero(order);
    BPoly2 pw = u;
    for (int t = 1; t <= order; ++t) {
        if (t > 1) pw = bpoly2_mul(b, pw, u, order);
        if (F.expc[t].is_zero()) continue;
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j)
                if (!pw[i][j].is_zero())
                    acc[i][j] = bp_add(b, acc[i][j], bp_mul(b, F.expc[t], pw[i][j]));
    }
    F.a = std::move(acc);
    return F;
}

namespace {

// largest k <= cap with s^k nonzero; fills powers[0..result]
int fill_powers(const Series& s, int cap, std::vector<Series>& powers) {
    powers.clear();
    powers.push_back(s_const(s.ros, 1));
    for (int k = 1; k <= cap; ++k) {
        Series p = s_mul(powers.back(), s);
        if (s_is_zero(p) && !p.truncated) break;
        powers.push_back(std::move(p));
        if (s_is_zero(powers.back())) break;
    }
    return (int)powers.size() - 1;
}

}  // namespace

Series fgl_sum(const FormalGroupLaw& F, const Series& s, const Series& t) {
    if (s.ros != t.ros) throw std::invalid_argument("fgl_sum: roster mismatch");
    if (s.ros->base != F.base) throw std::invalid_argument("fgl_sum: base mismatch");
    std::vector<Series> ps, pt;
    int si = fill_powers(s, F.order, ps);
    int tj = fill_powers(t, F.order, pt);
    Series r = s_add(s, t);
    for (int i = 1; i <= si; ++i)
        for (int j = 1; j <= tj; ++j) {
            if (i + j > F.order) {
                if (!F.complete && !s_is_zero(ps[i]) && !s_is_zero(pt[j])) r.truncated = true;
                continue;
            }
            if (F.a[i][j].is_zero()) continue;
            Series term = s_mul(ps[i], pt[j]);
            r = s_add(r, s_mul(s_base(s.ros, F.a[i][j]), term));
        }
    return r;
}

Series fgl_iterated_sum(const FormalGroupLaw& F, const std::vector<Series>& terms) {
    if (terms.empty()) throw std::invalid_argument("fgl_iterated_sum: empty list");
    Series r = terms[0];
    for (size_t k = 1; k < terms.size(); ++k) r = fgl_sum(F, r, terms[k]);
    return r;
}

Series fgl_inverse(const FormalGroupLaw& F, const Series& s) {
    Series inv = s_neg(s);
    for (int iter = 0; iter < 500; ++iter) {
        Series err = fgl_sum(F, s, inv);
        if (s_is_zero(err)) {
            inv.truncated = inv.truncated || err.truncated;
            return inv;
        }
        inv = s_sub(inv, err);
    }
    throw std::runtime_error("fgl_inverse: no convergence (is the element topologically nilpotent?)");
}

Series fgl_n_series(const FormalGroupLaw& F, long n, const Series& s) {
    if (n < 0) return fgl_inverse(F, fgl_n_series(F, -n, s));
    Series r = s_zero(s.ros);
    for (long k = 0; k < n; ++k) r = s_is_zero(r) && k == 0 ? s : fgl_sum(F, r, s);
    return r;
}

Series euler_coeff(const FormalGroupLaw& F, int i, const Series& u) {
    if (i < 0 || i > F.order) throw std::invalid_argument("euler_coeff: index out of range");
    std::vector<Series> pu;
    int jmax = fill_powers(u, F.order - i, pu);
    Series r = s_zero(u.ros);
    for (int j = 0; j <= jmax; ++j) {
        if (F.coeff(i, j).is_zero()) continue;
        r = s_add(r, s_mul(s_base(u.ros, F.coeff(i, j)), pu[j]));
    }
    if (!F.complete) {
        Series probe = s_pow(u, F.order - i + 1);
        if (!s_is_zero(probe) || probe.truncated) r.truncated = true;
    }
    return r;
}

}  // namespace cobord
