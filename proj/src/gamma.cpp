#include "cobord/gamma.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cobord {

namespace {

Subgroup trivial_subgroup(const FinAbGroup& G) {
    size_t r = G.rank();
    Subgroup s;
    s.lat = ZMat(r, r);
    for (size_t i = 0; i < r; ++i) s.lat.a[i][i] = G.factors[i];
    s.order = 1;
    s.elems = {G.zero()};
    return s;
}

Subgroup full_subgroup(const FinAbGroup& G) {
    Subgroup s;
    s.lat = ZMat::identity(G.rank());
    s.order = G.order();
    s.elems = G.elements();
    return s;
}

std::string psi_name(int level, const Exp& psi) {
    std::string s = "u" + std::to_string(level) + "[";
    for (size_t i = 0; i < psi.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(psi[i]);
    }
    return s + "]";
}

// factor indices of chi (trivial on H[start]) over the generator list
std::vector<int> decompose(const FinAbGroup& G, const std::vector<Subgroup>& H,
                           const std::vector<RepInfo>& reps, const Character& chi, int start) {
    if (!char_trivial_on(G, chi, H[start]))
        throw std::invalid_argument("decompose_character: not trivial on the starting subgroup");
    std::vector<int> out;
    Character cur = chi;
    int levels = (int)H.size() - 1;
    for (int t = start; t < levels; ++t) {
        if (H[t + 1].order == H[t].order) continue;
        if (char_trivial_on(G, cur, H[t + 1])) continue;
        int found = -1;
        for (size_t r = 0; r < reps.size(); ++r) {
            if (reps[r].level != t) continue;
            if (char_equal_on(G, cur, reps[r].lift.chi, H[t + 1])) {
                if (found >= 0) throw std::logic_error("decompose_character: ambiguous factor");
                found = (int)r;
            }
        }
        if (found < 0) throw std::logic_error("decompose_character: no factor at a nontrivial level");
        out.push_back(found);
        cur = char_mul(G, cur, char_inv(G, reps[found].lift.chi));
    }
    if (!char_is_trivial(cur))
        throw std::logic_error("decompose_character: nontrivial remainder after the last level");
    return out;
}

}  // namespace

int GammaRing::class_var(int rep, int i) const {
    if (i < 1 || i > tp.I) throw std::out_of_range("class_var: class index out of range");
    return cvar[(size_t)rep * tp.I + (i - 1)];
}

GammaRing build_gamma(const FinAbGroup& G, const std::vector<Subgroup>& chain,
                      const TruncParams& tp, const FormalGroupLaw& law) {
    if (chain.empty()) throw std::invalid_argument("build_gamma: empty chain");
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        if (!(chain[i].order < chain[i + 1].order) || !subgroup_leq(chain[i], chain[i + 1]))
            throw std::invalid_argument("build_gamma: chain is not strictly ascending");
    if (tp.D < 1 || tp.E < 1 || tp.N < 1 || tp.I < 1 || tp.P < 0)
        throw std::invalid_argument("build_gamma: invalid truncation parameters");

    GammaRing R;
    R.G = G;
    R.chain = chain;
    R.tp = tp;
    R.law = law;
    R.k = (int)chain.size();
    Subgroup full = full_subgroup(G);
    R.H.push_back(trivial_subgroup(G));
    for (const auto& s : chain) R.H.push_back(s);
    R.H.push_back(full);

    // generators, level by level
    for (int j = 0; j <= R.k; ++j) {
        if (R.H[j + 1].order == R.H[j].order) continue;
        SubquotientView view01 = subquotient_view(G, R.H[j], R.H[j + 1]);
        SubquotientView view0G = subquotient_view(G, R.H[j], full);
        std::vector<RepInfo> batch;
        for (const Character& lambda : characters(view01.grp)) {
            if (char_is_trivial(lambda)) continue;
            RepInfo ri;
            ri.level = j;
            ri.lift = lift_character(G, R.H[j], R.H[j + 1], lambda, view01, view0G);
            ri.name = psi_name(j, ri.lift.psi);
            batch.push_back(std::move(ri));
        }
        std::sort(batch.begin(), batch.end(),
                  [](const RepInfo& a, const RepInfo& b) { return a.lift.psi < b.lift.psi; });
        for (auto& ri : batch) R.reps.push_back(std::move(ri));
    }

    // roster: one Euler variable per generator, then the class sector
    Roster ros;
    ros.base = law.base;
    ros.laurent_bound = tp.E;
    ros.poly_bound = tp.P;
    R.uvar.resize(R.reps.size());
    R.cvar.assign(R.reps.size() * tp.I, -1);
    for (size_t r = 0; r < R.reps.size(); ++r) {
        int j = R.reps[r].level;
        VarInfo vi;
        vi.name = R.reps[r].name;
        vi.degree = -2;
        if (j == 0) {
            vi.mode = VarMode::Laurent;
        } else if (j == R.k) {
            vi.mode = VarMode::SeriesOnly;
            vi.block = j;
        } else {
            vi.mode = VarMode::LaurentSeries;
            vi.block = j;
        }
        if (vi.block >= 0) ros.block_bound[vi.block] = tp.N;
        R.uvar[r] = (int)ros.vars.size();
        ros.vars.push_back(std::move(vi));
    }
    for (size_t r = 0; r < R.reps.size(); ++r) {
        if (R.reps[r].level != 0) continue;
        for (int i = 1; i <= tp.I; ++i) {
            VarInfo vi;
            vi.name = R.reps[r].name + "^(" + std::to_string(i) + ")";
            vi.degree = 2 * i - 2;
            vi.mode = VarMode::Polynomial;
            R.cvar[r * tp.I + (i - 1)] = (int)ros.vars.size();
            ros.vars.push_back(std::move(vi));
        }
    }
    R.ros = std::make_shared<Roster>(std::move(ros));

    // relations: one per unordered pair at each completed level
    for (int j = 1; j <= R.k; ++j) {
        std::vector<int> lvl;
        for (size_t r = 0; r < R.reps.size(); ++r)
            if (R.reps[r].level == j) lvl.push_back((int)r);
        for (size_t a = 0; a < lvl.size(); ++a) {
            for (size_t b = a; b < lvl.size(); ++b) {
                Character prod = char_mul(G, R.reps[lvl[a]].lift.chi, R.reps[lvl[b]].lift.chi);
                std::vector<int> fs = decompose(G, R.H, R.reps, prod, j);
                std::vector<Series> terms;
                for (int f : fs) terms.push_back(s_var(R.ros, R.uvar[f]));
                Series lhs = fgl_sum(R.law, s_var(R.ros, R.uvar[lvl[a]]), s_var(R.ros, R.uvar[lvl[b]]));
                // trivial product character has Euler element 0 (empty sum)
                Series rhs = terms.empty() ? s_zero(R.ros) : fgl_iterated_sum(R.law, terms);
                R.relations.push_back(s_sub(lhs, rhs));
            }
        }
    }
    return R;
}

std::vector<int> decompose_character(const GammaRing& R, const Character& chi, int start_level) {
    return decompose(R.G, R.H, R.reps, chi, start_level);
}

const Series& RingMap::power(size_t v, int k) const {
    auto& cache = powers[v];
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    Series s;
    if (k == 0) {
        s = s_const(wide, 1);
    } else if (k == 1) {
        s = s_embed(img[v], wide);
    } else if (k == -1) {
        s = s_reciprocal(power(v, 1));
    } else if (k > 1) {
        s = s_mul(power(v, k - 1), power(v, 1));
    } else {
        s = s_mul(power(v, k + 1), power(v, -1));
    }
    return cache.emplace(k, std::move(s)).first->second;
}

Series map_series(const RingMap& f, const Series& a) {
    Series out = s_zero(f.wide);
    out.truncated = a.truncated;
    for (const auto& [e, p] : a.t) {
        Series term = s_base(f.wide, p);
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] != 0) term = s_mul(term, f.power(v, e[v]));
        out = s_add(out, term);
    }
    return s_restrict(out, f.dros);
}

ZMat map_matrix(const RingMap& f, const DegPresentation& sp, const DegPresentation& dp,
                bool& truncated) {
    ZMat M(sp.dim(), dp.dim());
    for (size_t i = 0; i < sp.dim(); ++i) {
        BasePoly one;
        one.t[sp.gens[i].be] = 1;
        Series mono = s_monomial(f.sros, sp.gens[i].ve, one);
        Series im = map_series(f, mono);
        truncated = truncated || im.truncated;
        M.a[i] = series_coords(dp, im);
    }
    return M;
}

std::shared_ptr<const Roster> map_workspace(const std::shared_ptr<const Roster>& dros) {
    Roster w = *dros;
    int slack = w.poly_bound;
    for (const auto& [blk, bound] : w.block_bound) slack += bound;
    w.laurent_bound += slack;
    return std::make_shared<Roster>(std::move(w));
}

void mixed_euler_image(const FormalGroupLaw& law, const std::shared_ptr<const Roster>& ros,
                       int uvar_M0, const std::vector<int>& cls_M0, const Series& v, int I,
                       Series& img_u, std::vector<Series>& img_cls) {
    Series u_img = s_var(ros, (size_t)uvar_M0);
    Series vpow = s_const(ros, 1);
    for (int t = 1; t <= I; ++t) {
        vpow = s_mul(vpow, v);
        u_img = s_add(u_img, s_mul(s_var(ros, (size_t)cls_M0[(size_t)t - 1]), vpow));
    }
    Series vtail = s_mul(vpow, v);  // v^(I+1): lost class coefficients
    if (!s_is_zero(vtail)) u_img.truncated = true;
    img_u = std::move(u_img);

    auto wider = roster_with_temp_var(ros, "#x", -2, I);
    Series x = s_var(wider, wider->nvars() - 1);
    Series W = fgl_sum(law, s_embed(v, wider), x);
    img_cls.assign((size_t)I, s_zero(ros));
    Series Wpow = s_const(wider, 1);
    for (int t = 1; t <= I; ++t) {
        Wpow = s_mul(Wpow, W);
        Series cls = s_var(ros, (size_t)cls_M0[(size_t)t - 1]);
        for (int i = 1; i <= I; ++i) {
            Series co = s_coeff_of_last(Wpow, i, ros);
            if (!s_is_zero(co)) img_cls[(size_t)i - 1] = s_add(img_cls[(size_t)i - 1], s_mul(cls, co));
        }
    }
    Series Wtail = s_mul(Wpow, W);  // W^(I+1) probes the dropped classes
    for (int i = 1; i <= I; ++i)
        if (!s_is_zero(s_coeff_of_last(Wtail, i, ros))) img_cls[(size_t)i - 1].truncated = true;
}

RingMap structure_map(const GammaRing& S, const GammaRing& T) {
    if (S.G.factors != T.G.factors) throw std::invalid_argument("structure_map: different groups");
    if (S.tp.D != T.tp.D || S.tp.E != T.tp.E || S.tp.N != T.tp.N || S.tp.I != T.tp.I ||
        S.tp.P != T.tp.P)
        throw std::invalid_argument("structure_map: different truncation windows");
    if (S.law.kind != T.law.kind || S.law.order != T.law.order ||
        S.law.base->max_degree != T.law.base->max_degree)
        throw std::invalid_argument("structure_map: different laws");
    for (const auto& s : S.chain) {
        bool found = false;
        for (const auto& t : T.chain) found = found || subgroup_eq(s, t);
        if (!found) throw std::invalid_argument("structure_map: source chain is not a subchain");
    }

    RingMap f;
    f.sros = S.ros;
    f.dros = T.ros;
    f.img.resize(S.ros->nvars());
    f.powers.resize(S.ros->nvars());
    f.wide = map_workspace(T.ros);
    const FormalGroupLaw& law = T.law;
    int I = T.tp.I;

    for (size_t r = 0; r < S.reps.size(); ++r) {
        int j = S.reps[r].level;
        int jp = -1;
        for (int t = 0; t <= T.k + 1 && jp < 0; ++t)
            if (subgroup_eq(T.H[t], S.H[j])) jp = t;
        if (jp < 0) throw std::logic_error("structure_map: level subgroup missing in target");
        std::vector<int> fs = decompose_character(T, S.reps[r].lift.chi, jp);
        if (fs.empty()) throw std::logic_error("structure_map: generator character decomposed to nothing");

        bool has0 = T.reps[fs[0]].level == 0;
        if (has0 && j != 0)
            throw std::logic_error("structure_map: free factor for a completed generator");

        if (!has0) {
            // Euler element of the factorization, entirely in completed levels
            std::vector<Series> terms;
            for (int ft : fs) terms.push_back(s_var(T.ros, T.uvar[ft]));
            Series u = fgl_iterated_sum(law, terms);
            f.img[S.uvar[r]] = u;
            if (j == 0)
                for (int i = 1; i <= I; ++i) f.img[S.class_var((int)r, i)] = euler_coeff(law, i, u);
            continue;
        }

        int M0 = fs[0];
        if (fs.size() == 1) {
            // same free character on both sides: name-preserving
            f.img[S.uvar[r]] = s_var(T.ros, T.uvar[M0]);
            for (int i = 1; i <= I; ++i)
                f.img[S.class_var((int)r, i)] = s_var(T.ros, T.class_var(M0, i));
            continue;
        }

        // mixed factorization u_chi = u_M0 +_F v with v completed: expand the
        // law around the free part using the class generators of M0
        std::vector<Series> rest;
        for (size_t q = 1; q < fs.size(); ++q) rest.push_back(s_var(T.ros, T.uvar[fs[q]]));
        Series v = fgl_iterated_sum(law, rest);

        std::vector<int> cls(I);
        for (int i = 1; i <= I; ++i) cls[(size_t)i - 1] = T.class_var(M0, i);
        Series u_img;
        std::vector<Series> cimg;
        mixed_euler_image(law, T.ros, T.uvar[M0], cls, v, I, u_img, cimg);
        f.img[S.uvar[r]] = std::move(u_img);
        for (int i = 1; i <= I; ++i) f.img[S.class_var((int)r, i)] = std::move(cimg[(size_t)i - 1]);
    }
    return f;
}

DegPresentation gamma_presentation(const GammaRing& R, int degree) {
    return graded_presentation(R.ros, R.relations, degree);
}

std::string gamma_describe(const GammaRing& R) {
    std::ostringstream os;
    os << "Gamma over " << R.G.name() << ", chain orders";
    for (const auto& s : R.chain) os << " " << s.order;
    os << "\n";
    for (size_t r = 0; r < R.reps.size(); ++r) {
        const VarInfo& vi = R.ros->vars[R.uvar[r]];
        const char* mode = vi.mode == VarMode::Laurent        ? "invertible"
                           : vi.mode == VarMode::LaurentSeries ? "invertible series"
                                                                : "series";
        os << "  " << R.reps[r].name << "  level " << R.reps[r].level << "  " << mode;
        if (R.reps[r].level == 0) os << "  with classes ^(1.." << R.tp.I << ")";
        os << "\n";
    }
    os << R.relations.size() << " relation(s)\n";
    for (const auto& rel : R.relations) os << "  0 = " << s_to_string(rel) << "\n";
    return os.str();
}

}  // namespace cobord
