#include "cobord/series.hpp"

#include <stdexcept>

namespace cobord {

int Roster::find(const std::string& name) const {
    for (size_t v = 0; v < vars.size(); ++v)
        if (vars[v].name == name) return (int)v;
    return -1;
}

bool Roster::in_window(const Exp& e) const {
    std::map<int, int> block_pos;
    int poly_total = 0;
    for (size_t v = 0; v < vars.size(); ++v) {
        int ev = e[v];
        if (ev == 0) continue;
        switch (vars[v].mode) {
            case VarMode::Polynomial:
                if (ev < 0) return false;
                poly_total += ev;
                break;
            case VarMode::Laurent:
                if (ev < -laurent_bound || ev > laurent_bound) return false;
                break;
            case VarMode::LaurentSeries:
                if (ev < -laurent_bound) return false;
                if (ev > 0) block_pos[vars[v].block] += ev;
                break;
            case VarMode::SeriesOnly:
                if (ev < 0) return false;
                block_pos[vars[v].block] += ev;
                break;
        }
    }
    if (poly_total > poly_bound) return false;
    for (const auto& [b, total] : block_pos)
        if (total > block_bound.at(b)) return false;
    return true;
}

int Roster::var_degree(const Exp& e) const {
    int d = 0;
    for (size_t v = 0; v < vars.size(); ++v) d += e[v] * vars[v].degree;
    return d;
}

std::shared_ptr<const Roster> roster_with_temp_var(const std::shared_ptr<const Roster>& ros,
                                                   const std::string& name, int degree,
                                                   int bound) {
    auto r = std::make_shared<Roster>(*ros);
    int block = 0;
    for (const auto& [b, n] : ros->block_bound) block = std::max(block, b + 1);
    r->vars.push_back(VarInfo{name, degree, VarMode::SeriesOnly, block});
    r->block_bound[block] = bound;
    return r;
}

Series s_zero(std::shared_ptr<const Roster> ros) {
    Series s;
    s.ros = std::move(ros);
    return s;
}

Series s_const(std::shared_ptr<const Roster> ros, const Rat& c) {
    Series s = s_zero(std::move(ros));
    BasePoly p = bp_const(*s.ros->base, c);
    if (!p.is_zero()) s.t[Exp(s.ros->nvars(), 0)] = p;
    return s;
}

Series s_base(std::shared_ptr<const Roster> ros, const BasePoly& p) {
    Series s = s_zero(std::move(ros));
    if (!p.is_zero()) s.t[Exp(s.ros->nvars(), 0)] = p;
    return s;
}

Series s_var(std::shared_ptr<const Roster> ros, size_t v, int power) {
    Series s = s_zero(std::move(ros));
    if (v >= s.ros->nvars()) throw std::invalid_argument("s_var: index out of range");
    Exp e(s.ros->nvars(), 0);
    e[v] = power;
    if (!s.ros->in_window(e)) throw std::invalid_argument("s_var: power outside the window");
    s.t[e] = bp_const(*s.ros->base, 1);
    return s;
}

Series s_monomial(std::shared_ptr<const Roster> ros, const Exp& e, const BasePoly& p) {
    Series s = s_zero(std::move(ros));
    s.t[e] = p;
    s_norm(s);
    return s;
}

bool s_is_zero(const Series& a) { return a.t.empty(); }

void s_norm(Series& a) {
    for (auto it = a.t.begin(); it != a.t.end();) {
        if (!a.ros->in_window(it->first)) {
            a.truncated = true;
            it = a.t.erase(it);
            continue;
        }
        bp_norm(*a.ros->base, it->second, &a.truncated);
        it = it->second.is_zero() ? a.t.erase(it) : std::next(it);
    }
}

namespace {
void check_same(const Series& a, const Series& b) {
    if (a.ros != b.ros) throw std::invalid_argument("series roster mismatch");
}
}  // namespace

Series s_add(const Series& a, const Series& b) {
    check_same(a, b);
    Series r = a;
    r.truncated = a.truncated || b.truncated;
    for (const auto& [e, p] : b.t) {
        auto it = r.t.find(e);
        if (it == r.t.end()) r.t[e] = p;
        else it->second = bp_add(*r.ros->base, it->second, p);
    }
    s_norm(r);
    return r;
}

Series s_neg(const Series& a) {
    Series r = a;
    for (auto& [e, p] : r.t) p = bp_neg(*r.ros->base, p);
    return r;
}

Series s_sub(const Series& a, const Series& b) { return s_add(a, s_neg(b)); }

Series s_mul(const Series& a, const Series& b) {
    check_same(a, b);
    Series r = s_zero(a.ros);
    r.truncated = a.truncated || b.truncated;
    for (const auto& [ea, pa] : a.t)
        for (const auto& [eb, pb] : b.t) {
            Exp e(ea.size());
            for (size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
            if (!r.ros->in_window(e)) {
                r.truncated = true;
                continue;
            }
            BasePoly p = bp_mul(*r.ros->base, pa, pb, &r.truncated);
            if (p.is_zero()) continue;
            auto it = r.t.find(e);
            if (it == r.t.end()) r.t[e] = p;
            else it->second = bp_add(*r.ros->base, it->second, p);
        }
    s_norm(r);
    return r;
}

Series s_scale(const Rat& c, const Series& a) {
    Series r = s_zero(a.ros);
    r.truncated = a.truncated;
    for (const auto& [e, p] : a.t) {
        BasePoly q = bp_scale(*r.ros->base, c, p);
        if (!q.is_zero()) r.t[e] = q;
    }
    return r;
}

Series s_pow(const Series& a, int k) {
    if (k < 0) throw std::invalid_argument("s_pow: negative power");
    Series r = s_const(a.ros, 1);
    Series f = a;
    while (k > 0) {
        if (k & 1) r = s_mul(r, f);
        k >>= 1;
        if (k) f = s_mul(f, f);
    }
    return r;
}

bool s_equal(const Series& a, const Series& b) {
    check_same(a, b);
    return a.t == b.t;
}

int s_degree(const Series& a) {
    int d = 0;
    bool first = true;
    for (const auto& [e, p] : a.t) {
        int vd = a.ros->var_degree(e);
        for (const auto& [be, c] : p.t) {
            int td = vd + a.ros->base->degree_of(be);
            if (first) {
                d = td;
                first = false;
            } else if (td != d) {
                throw std::runtime_error("s_degree: series is not homogeneous");
            }
        }
    }
    return d;
}

bool s_is_homogeneous(const Series& a, int degree) {
    for (const auto& [e, p] : a.t) {
        int vd = a.ros->var_degree(e);
        for (const auto& [be, c] : p.t)
            if (vd + a.ros->base->degree_of(be) != degree) return false;
    }
    return true;
}

Series s_embed(const Series& a, std::shared_ptr<const Roster> wider) {
    if (wider->nvars() < a.ros->nvars())
        throw std::invalid_argument("s_embed: target roster is narrower");
    Series r = s_zero(std::move(wider));
    r.truncated = a.truncated;
    for (const auto& [e, p] : a.t) {
        Exp w(r.ros->nvars(), 0);
        for (size_t v = 0; v < e.size(); ++v) w[v] = e[v];
        r.t[std::move(w)] = p;
    }
    s_norm(r);
    return r;
}

Series s_restrict(const Series& a, std::shared_ptr<const Roster> narrow) {
    if (narrow->nvars() != a.ros->nvars())
        throw std::invalid_argument("s_restrict: rosters differ in variables");
    Series r = s_zero(std::move(narrow));
    r.truncated = a.truncated;
    r.t = a.t;
    s_norm(r);
    return r;
}

Series s_coeff_of_last(const Series& a, int power, std::shared_ptr<const Roster> narrow) {
    size_t last = a.ros->nvars() - 1;
    if (narrow->nvars() != last)
        throw std::invalid_argument("s_coeff_of_last: roster size mismatch");
    Series r = s_zero(std::move(narrow));
    r.truncated = a.truncated;
    for (const auto& [e, p] : a.t) {
        if (e[last] != power) continue;
        Exp w(e.begin(), e.end() - 1);
        r.t[std::move(w)] = p;
    }
    s_norm(r);
    return r;
}

namespace {

// total exponent on completed (non-Laurent) variables; monomials with
// positive weight vanish under enough self-multiplication in any window
int completed_weight(const Roster& ros, const Exp& e) {
    int w = 0;
    for (size_t v = 0; v < e.size(); ++v)
        if (e[v] > 0 && ros.vars[v].mode != VarMode::Laurent) w += e[v];
    return w;
}

bool monomial_invertible(const Roster& ros, const Exp& e) {
    for (size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        VarMode m = ros.vars[v].mode;
        if (m == VarMode::Polynomial || m == VarMode::SeriesOnly) return false;
    }
    Exp neg(e.size());
    for (size_t v = 0; v < e.size(); ++v) neg[v] = -e[v];
    return ros.in_window(e) && ros.in_window(neg);
}

// inverse of a single-monomial base coefficient, or false
bool coeff_inverse(const GradedBase& b, const BasePoly& p, BasePoly& out) {
    if (p.t.size() != 1) return false;
    const auto& [be, c] = *p.t.begin();
    for (int32_t x : be)
        if (x != 0) return false;
    if (b.kind == BaseKind::ModPReduced) {
        if (!is_integer(c)) return false;
        Int num = c.get_num(), inv, mod(b.modulus);
        if (mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), mod.get_mpz_t()) == 0) return false;
        out = bp_const(b, Rat(inv));
        return true;
    }
    if (c == 1 || c == -1) {
        out = bp_const(b, c);
        return true;
    }
    return false;
}

}  // namespace

Series s_reciprocal(const Series& a) {
    const Roster& ros = *a.ros;
    if (a.t.empty()) throw std::domain_error("s_reciprocal: zero series");
    for (const auto& [me, mp] : a.t) {
        BasePoly cinv;
        if (!monomial_invertible(ros, me) || !coeff_inverse(*ros.base, mp, cinv)) continue;
        bool ok = true;
        for (const auto& [oe, op] : a.t) {
            if (oe == me) continue;
            Exp rel(oe.size());
            for (size_t v = 0; v < oe.size(); ++v) rel[v] = oe[v] - me[v];
            if (completed_weight(ros, rel) < 1) {
                ok = false;
                break;
            }
            (void)op;
        }
        if (!ok) continue;
        Exp minus(me.size());
        for (size_t v = 0; v < me.size(); ++v) minus[v] = -me[v];
        Series minv = s_monomial(a.ros, minus, cinv);
        Series n = s_mul(a, minv);  // 1 + nilpotent part
        n = s_sub(n, s_const(a.ros, 1));
        Series acc = s_const(a.ros, 1);
        Series pw = s_const(a.ros, 1);
        Series nn = s_neg(n);
        for (int t = 1; t <= 1000; ++t) {
            pw = s_mul(pw, nn);
            if (s_is_zero(pw)) break;
            if (t == 1000) throw std::runtime_error("s_reciprocal: geometric series did not terminate");
            acc = s_add(acc, pw);
        }
        return s_mul(acc, minv);
    }
    throw std::runtime_error("s_reciprocal: no invertible leading term found");
}

std::string s_to_string(const Series& a) {
    if (a.t.empty()) return "0";
    std::vector<std::string> names;
    for (const auto& v : a.ros->vars) names.push_back(v.name);
    std::string s;
    bool first = true;
    for (const auto& [e, p] : a.t) {
        std::string mono = monomial_to_string(names, e);
        std::string coeff = bp_to_string(*a.ros->base, p);
        bool neg = false;
        if (p.t.size() == 1 && coeff[0] == '-') {
            neg = true;
            coeff = coeff.substr(1);
        }
        if (first) {
            if (neg) s += "-";
            first = false;
        } else {
            s += neg ? " - " : " + ";
        }
        if (mono.empty()) {
            s += coeff;
        } else if (p.t.size() == 1) {
            if (coeff != "1") s += coeff;
            s += mono;
        } else {
            s += "(" + coeff + ")" + mono;
        }
    }
    return s;
}

}  // namespace cobord
