#include "cobord/base.hpp"

#include <stdexcept>

namespace cobord {

const char* base_kind_name(BaseKind k) {
    switch (k) {
        case BaseKind::Additive: return "additive";
        case BaseKind::Multiplicative: return "multiplicative";
        case BaseKind::UniversalRational: return "universal-rational";
        case BaseKind::UniversalIntegral: return "universal-integral";
        case BaseKind::ModPReduced: return "mod-p";
    }
    return "?";
}

BaseKind base_kind_from_name(const std::string& s) {
    if (s == "additive") return BaseKind::Additive;
    if (s == "multiplicative") return BaseKind::Multiplicative;
    if (s == "universal-rational") return BaseKind::UniversalRational;
    if (s == "universal-integral") return BaseKind::UniversalIntegral;
    if (s == "mod-p") return BaseKind::ModPReduced;
    throw std::invalid_argument("unknown law kind: " + s);
}

int GradedBase::degree_of(const Exp& e) const {
    int d = 0;
    for (size_t i = 0; i < e.size(); ++i) d += e[i] * degrees[i];
    return d;
}

std::shared_ptr<const GradedBase> make_base(BaseKind kind, int max_degree, long p) {
    if (max_degree < 0 || max_degree % 2 != 0)
        throw std::invalid_argument("make_base: max_degree must be even and nonnegative");
    auto b = std::make_shared<GradedBase>();
    b->kind = kind;
    b->max_degree = max_degree;
    int d = max_degree / 2;
    switch (kind) {
        case BaseKind::Additive:
            break;
        case BaseKind::Multiplicative:
            b->names.push_back("β");
            b->degrees.push_back(2);
            break;
        case BaseKind::UniversalRational:
            for (int i = 1; i <= d; ++i) {
                b->names.push_back("m" + std::to_string(i));
                b->degrees.push_back(2 * i);
            }
            break;
        case BaseKind::UniversalIntegral:
        case BaseKind::ModPReduced:
            for (int i = 1; i <= d; ++i) {
                b->names.push_back("x" + std::to_string(i));
                b->degrees.push_back(2 * i);
            }
            if (kind == BaseKind::ModPReduced) {
                if (p < 2) throw std::invalid_argument("make_base: mod-p base needs a prime p");
                b->modulus = p;
            }
            break;
    }
    return b;
}

BasePoly bp_const(const GradedBase& b, const Rat& c) {
    BasePoly p;
    if (sgn(c) != 0) p.t[Exp(b.ngens(), 0)] = c;
    bp_norm(b, p);
    return p;
}

BasePoly bp_gen(const GradedBase& b, size_t i) {
    if (i >= b.ngens()) throw std::invalid_argument("bp_gen: index out of range");
    BasePoly p;
    Exp e(b.ngens(), 0);
    e[i] = 1;
    p.t[e] = 1;
    bp_norm(b, p);
    return p;
}

void bp_norm(const GradedBase& b, BasePoly& p, bool* truncated) {
    for (auto it = p.t.begin(); it != p.t.end();) {
        bool drop = false;
        if (b.degree_of(it->first) > b.max_degree) {
            drop = true;
            if (truncated) *truncated = true;
        } else {
            it->second.canonicalize();
            if (b.modulus != 0 && sgn(it->second) != 0) {
                if (it->second.get_den() != 1)
                    throw std::runtime_error("bp_norm: non-integral coefficient in mod-p base");
                Int r;
                Int m(b.modulus);
                mpz_fdiv_r(r.get_mpz_t(), it->second.get_num().get_mpz_t(), m.get_mpz_t());
                it->second = Rat(r);
            }
            if (sgn(it->second) == 0) drop = true;
        }
        it = drop ? p.t.erase(it) : std::next(it);
    }
}

BasePoly bp_add(const GradedBase& b, const BasePoly& x, const BasePoly& y) {
    BasePoly r = x;
    for (const auto& [e, c] : y.t) r.t[e] += c;
    bp_norm(b, r);
    return r;
}

BasePoly bp_sub(const GradedBase& b, const BasePoly& x, const BasePoly& y) {
    BasePoly r = x;
    for (const auto& [e, c] : y.t) r.t[e] -= c;
    bp_norm(b, r);
    return r;
}

BasePoly bp_neg(const GradedBase& b, const BasePoly& x) {
    BasePoly r;
    for (const auto& [e, c] : x.t) r.t[e] = -c;
    bp_norm(b, r);
    return r;
}

BasePoly bp_mul(const GradedBase& b, const BasePoly& x, const BasePoly& y, bool* truncated) {
    BasePoly r;
    for (const auto& [ex, cx] : x.t)
        for (const auto& [ey, cy] : y.t) {
            Exp e(ex.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
            if (b.degree_of(e) > b.max_degree) {
                if (truncated) *truncated = true;
                continue;
            }
            r.t[e] += cx * cy;
        }
    bp_norm(b, r, truncated);
    return r;
}

BasePoly bp_scale(const GradedBase& b, const Rat& c, const BasePoly& x) {
    BasePoly r;
    if (sgn(c) != 0)
        for (const auto& [e, v] : x.t) r.t[e] = c * v;
    bp_norm(b, r);
    return r;
}

int bp_degree(const GradedBase& b, const BasePoly& x) {
    int d = 0;
    bool first = true;
    for (const auto& [e, c] : x.t) {
        int de = b.degree_of(e);
        if (first) {
            d = de;
            first = false;
        } else if (de != d) {
            throw std::runtime_error("bp_degree: polynomial is not homogeneous");
        }
    }
    return d;
}

bool bp_is_integral(const BasePoly& x) {
    for (const auto& [e, c] : x.t)
        if (!is_integer(c)) return false;
    return true;
}

namespace {

const char* kSup[10] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};

std::string superscript(int n) {
    std::string s;
    if (n < 0) {
        s += "⁻";
        n = -n;
    }
    std::string digits = std::to_string(n);
    for (char c : digits) s += kSup[c - '0'];
    return s;
}

}  // namespace

std::string monomial_to_string(const std::vector<std::string>& names, const Exp& e) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        s += names[i];
        if (e[i] != 1) s += superscript(e[i]);
    }
    return s;
}

std::string bp_to_string(const GradedBase& b, const BasePoly& x) {
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : x.t) {
        Rat cc = c;
        bool neg = sgn(cc) < 0;
        if (neg) cc = -cc;
        if (first) {
            if (neg) s += "-";
            first = false;
        } else {
            s += neg ? " - " : " + ";
        }
        std::string mono = monomial_to_string(b.names, e);
        if (mono.empty()) s += to_string(cc);
        else {
            if (cc != 1) s += to_string(cc);
            s += mono;
        }
    }
    return s;
}

}  // namespace cobord
