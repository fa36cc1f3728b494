#include "cobord/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace cobord {

long FinAbGroup::order() const {
    long n = 1;
    for (long f : factors) n *= f;
    return n;
}

std::string FinAbGroup::name() const {
    if (factors.empty()) return "e";
    std::string s;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) s += " x ";
        s += "Z/" + std::to_string(factors[i]);
    }
    return s;
}

std::vector<Exp> FinAbGroup::elements() const {
    std::vector<Exp> out;
    Exp cur(rank(), 0);
    auto rec = [&](auto&& self, size_t t) -> void {
        if (t == rank()) {
            out.push_back(cur);
            return;
        }
        for (long v = 0; v < factors[t]; ++v) {
            cur[t] = (int32_t)v;
            self(self, t + 1);
        }
        cur[t] = 0;
    };
    rec(rec, 0);
    return out;
}

Exp FinAbGroup::add(const Exp& a, const Exp& b) const {
    Exp r(rank());
    for (size_t t = 0; t < rank(); ++t) r[t] = (int32_t)(((long)a[t] + b[t]) % factors[t]);
    return r;
}

Exp FinAbGroup::neg(const Exp& a) const {
    Exp r(rank());
    for (size_t t = 0; t < rank(); ++t) r[t] = (int32_t)((factors[t] - a[t]) % factors[t]);
    return r;
}

long max_group_order() {
    if (const char* env = std::getenv("COBORD_MAX_GROUP_ORDER")) {
        long v = std::atol(env);
        if (v > 0) return v;
    }
    return 72;
}

FinAbGroup parse_group(const std::string& text, long max_order) {
    // grammar: factor ("x"|"×"|"*" factor)*, factor = ["Z/"] n ["^" k] | "e" | "1" | "trivial"
    std::vector<long> moduli;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    auto parse_factor = [&]() -> void {
        skip_ws();
        if (text.compare(i, 7, "trivial") == 0) {
            i += 7;
            moduli.push_back(1);
            return;
        }
        if (i < text.size() && text[i] == 'e') {
            ++i;
            moduli.push_back(1);
            return;
        }
        if (text.compare(i, 2, "Z/") == 0) i += 2;
        size_t start = i;
        while (i < text.size() && isdigit((unsigned char)text[i])) ++i;
        if (i == start) throw std::invalid_argument("parse_group: expected a modulus in '" + text + "'");
        long n = std::stol(text.substr(start, i - start));
        if (i < text.size() && text[i] == '^') {
            ++i;
            size_t es = i;
            while (i < text.size() && isdigit((unsigned char)text[i])) ++i;
            if (i == es) throw std::invalid_argument("parse_group: expected an exponent in '" + text + "'");
            long k = std::stol(text.substr(es, i - es));
            long v = 1;
            for (long t = 0; t < k; ++t) {
                v *= n;
                if (v > 1000000) throw std::invalid_argument("parse_group: modulus overflow");
            }
            n = v;
        }
        if (n < 1) throw std::invalid_argument("parse_group: modulus must be positive");
        moduli.push_back(n);
    };
    parse_factor();
    skip_ws();
    while (i < text.size()) {
        if (text[i] == 'x' || text[i] == '*') ++i;
        else if (text.compare(i, 2, "\xc3\x97") == 0) i += 2;  // unicode times
        else throw std::invalid_argument("parse_group: unexpected '" + text.substr(i) + "'");
        parse_factor();
        skip_ws();
    }
    long ord = 1;
    for (long n : moduli) {
        ord *= n;
        if (ord > max_order)
            throw std::invalid_argument("parse_group: group order exceeds the configured bound (" +
                                        std::to_string(max_order) + ")");
    }
    // invariant-factor normal form via the Smith form of diag(moduli)
    ZMat d((size_t)moduli.size(), (size_t)moduli.size());
    for (size_t t = 0; t < moduli.size(); ++t) d.a[t][t] = moduli[t];
    FinAbGroup G;
    for (const Int& f : smith(d).d)
        if (f > 1) G.factors.push_back(f.get_si());
    std::sort(G.factors.begin(), G.factors.end());
    return G;
}

bool Subgroup::contains(const Exp& g) const {
    return std::binary_search(elems.begin(), elems.end(), g);
}

namespace {

ZVec to_zvec(const Exp& e) {
    ZVec v(e.size());
    for (size_t t = 0; t < e.size(); ++t) v[t] = e[t];
    return v;
}

Subgroup make_subgroup(const FinAbGroup& G, const ZMat& hnf_lat) {
    Subgroup s;
    s.lat = hnf_lat;
    Lattice lat(G.rank());
    lat.insert_rows(hnf_lat);
    for (const Exp& g : G.elements())
        if (lat.contains(to_zvec(g))) s.elems.push_back(g);
    s.order = (long)s.elems.size();
    return s;
}

}  // namespace

std::vector<Subgroup> subgroups(const FinAbGroup& G) {
    size_t r = G.rank();
    ZMat diag(r, r);
    for (size_t t = 0; t < r; ++t) diag.a[t][t] = G.factors[t];
    std::map<std::vector<Int>, ZMat> seen;  // flattened HNF -> lattice
    auto key_of = [&](const ZMat& m) {
        std::vector<Int> k;
        k.push_back(Int((long)m.nrows));
        for (const ZVec& row : m.a) k.insert(k.end(), row.begin(), row.end());
        return k;
    };
    std::vector<ZMat> queue{hnf(diag)};
    seen[key_of(queue[0])] = queue[0];
    std::vector<Exp> elems = G.elements();
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        ZMat cur = queue[qi];
        for (const Exp& g : elems) {
            ZMat ext = cur;
            ext.append_row(to_zvec(g));
            ZMat h = hnf(ext);
            auto k = key_of(h);
            if (seen.emplace(k, h).second) queue.push_back(h);
        }
    }
    std::vector<Subgroup> out;
    for (const auto& [k, lat] : seen) out.push_back(make_subgroup(G, lat));
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order != b.order) return a.order < b.order;
        return a.elems < b.elems;
    });
    return out;
}

bool subgroup_leq(const Subgroup& a, const Subgroup& b) {
    Lattice lb(b.lat.ncols);
    lb.insert_rows(b.lat);
    for (const ZVec& row : a.lat.a)
        if (!lb.contains(row)) return false;
    return true;
}

bool subgroup_eq(const Subgroup& a, const Subgroup& b) { return a.lat == b.lat; }

int find_subgroup(const std::vector<Subgroup>& subs, const Subgroup& h) {
    for (size_t i = 0; i < subs.size(); ++i)
        if (subgroup_eq(subs[i], h)) return (int)i;
    return -1;
}

std::vector<Character> characters(const FinAbGroup& G) {
    std::vector<Character> out;
    for (const Exp& e : G.elements()) out.push_back(Character{e});
    return out;
}

Character char_mul(const FinAbGroup& G, const Character& a, const Character& b) {
    return Character{G.add(a.c, b.c)};
}

Character char_inv(const FinAbGroup& G, const Character& a) { return Character{G.neg(a.c)}; }

bool char_is_trivial(const Character& a) {
    for (int32_t v : a.c)
        if (v != 0) return false;
    return true;
}

Rat char_value(const FinAbGroup& G, const Character& chi, const Exp& g) {
    Rat acc(0);
    for (size_t t = 0; t < G.rank(); ++t) acc += Rat((long)chi.c[t] * g[t], G.factors[t]);
    acc.canonicalize();
    Int fl = fdiv_q(acc.get_num(), acc.get_den());
    acc -= Rat(fl);
    acc.canonicalize();
    return acc;
}

bool char_trivial_on(const FinAbGroup& G, const Character& chi, const Subgroup& H) {
    for (const Exp& g : H.elems)
        if (sgn(char_value(G, chi, g)) != 0) return false;
    return true;
}

bool char_equal_on(const FinAbGroup& G, const Character& a, const Character& b, const Subgroup& H) {
    for (const Exp& g : H.elems)
        if (char_value(G, a, g) != char_value(G, b, g)) return false;
    return true;
}

SubquotientView subquotient_view(const FinAbGroup& G, const Subgroup& H0, const Subgroup& H1) {
    if (!subgroup_leq(H0, H1))
        throw std::invalid_argument("subquotient_view: subgroups are not nested");
    SubquotientView v;
    v.B = H1.lat;
    // H0 lattice in B-coordinates
    ZMat M(0, G.rank());
    for (const ZVec& row : H0.lat.a) {
        ZVec x;
        if (!solve_left(v.B, row, &x))
            throw std::runtime_error("subquotient_view: containment solve failed");
        M.append_row(std::move(x));
    }
    SmithResult s = smith(M, true);
    v.V = s.V;
    for (size_t t = 0; t < s.d.size(); ++t) {
        if (s.d[t] == 1) continue;
        if (sgn(s.d[t]) == 0)
            throw std::runtime_error("subquotient_view: quotient is not finite");
        v.kept.push_back(t);
        v.grp.factors.push_back(s.d[t].get_si());
    }
    for (const ZVec& row : v.B.a) {
        Exp g(G.rank());
        for (size_t t = 0; t < G.rank(); ++t) {
            Int r;
            Int m(G.factors[t]);
            mpz_fdiv_r(r.get_mpz_t(), row[t].get_mpz_t(), m.get_mpz_t());
            g[t] = (int32_t)r.get_si();
        }
        v.h1_gens.push_back(g);
    }
    return v;
}

Exp SubquotientView::map_elem(const FinAbGroup& G, const Exp& g) const {
    ZVec x;
    if (!solve_left(B, to_zvec(g), &x))
        throw std::invalid_argument("SubquotientView::map_elem: element is not in the subgroup");
    ZVec y = vec_mat(x, V);
    Exp out(kept.size());
    for (size_t t = 0; t < kept.size(); ++t) {
        long m = grp.factors[t];
        Int r;
        Int mm(m);
        mpz_fdiv_r(r.get_mpz_t(), y[kept[t]].get_mpz_t(), mm.get_mpz_t());
        out[t] = (int32_t)r.get_si();
    }
    return out;
}

LiftedChar lift_character(const FinAbGroup& G, const Subgroup& H0, const Subgroup& H1,
                          const Character& lambda_on_view, const SubquotientView& view01,
                          const SubquotientView& view0G) {
    bool found = false;
    LiftedChar best;
    for (const Character& psi : characters(view0G.grp)) {
        bool match = true;
        for (const Exp& g : view01.h1_gens) {
            Rat lv = char_value(view01.grp, lambda_on_view, view01.map_elem(G, g));
            Rat pv = char_value(view0G.grp, psi, view0G.map_elem(G, g));
            if (lv != pv) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (!found || psi.c < best.psi) {
            found = true;
            best.psi = psi.c;
        }
    }
    if (!found) throw std::runtime_error("lift_character: no lift exists");
    // express the lift as a character of G via its values on the standard generators
    Character chi;
    chi.c.assign(G.rank(), 0);
    for (size_t t = 0; t < G.rank(); ++t) {
        Exp e = G.zero();
        e[t] = 1;
        Rat val = char_value(view0G.grp, Character{best.psi}, view0G.map_elem(G, e));
        val *= Rat(G.factors[t]);
        val.canonicalize();
        if (val.get_den() != 1)
            throw std::runtime_error("lift_character: non-integral character exponent");
        chi.c[t] = (int32_t)val.get_num().get_si();
    }
    best.chi = chi;
    return best;
}

}  // namespace cobord
