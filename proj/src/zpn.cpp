#include "cobord/zpn.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

namespace cobord {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; (long)d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

long power_checked(int p, int e) {
    long v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > (1L << 20)) throw std::invalid_argument("zpn: p^n too large");
        v *= p;
    }
    return v;
}

ZMat negate(ZMat m) {
    for (auto& row : m.a)
        for (auto& x : row) x = -x;
    return m;
}

}  // namespace

int ZpnRing::u_var(int j) const {
    if (j < 1 || (long)j > jmax()) throw std::out_of_range("ZpnRing::u_var: index out of range");
    return uvar[(size_t)j - 1];
}

int ZpnRing::w_var(int j, int i) const {
    if (j < 1 || (long)j > jmax() || i < 1 || i > tp.I)
        throw std::out_of_range("ZpnRing::w_var: index out of range");
    return wvar[(size_t)(j - 1) * tp.I + (i - 1)];
}

ZpnRing build_zpn_ring(ZpnRole role, int p, int n, int k, const TruncParams& tp,
                       const FormalGroupLaw& law) {
    if (!is_prime(p)) throw std::invalid_argument("build_zpn_ring: p must be prime");
    if (n < 1) throw std::invalid_argument("build_zpn_ring: n must be at least 1");
    if (role == ZpnRole::Free) {
        if (k != n) throw std::out_of_range("build_zpn_ring: the free top ring has k = n");
    } else if (k < 0 || k > n - 1) {
        throw std::out_of_range("build_zpn_ring: need 0 <= k <= n-1");
    }
    if (tp.D < 1 || tp.E < 1 || tp.N < 1 || tp.I < 1 || tp.P < 0)
        throw std::invalid_argument("build_zpn_ring: invalid truncation parameters");

    ZpnRing R;
    R.role = role;
    R.p = p;
    R.n = n;
    R.k = k;
    R.tp = tp;
    R.law = law;

    long jm = power_checked(p, k) - 1;
    Roster ros;
    ros.base = law.base;
    ros.laurent_bound = tp.E;
    ros.poly_bound = tp.P;
    R.uvar.resize((size_t)jm);
    for (long j = 1; j <= jm; ++j) {
        VarInfo vi;
        vi.name = "u" + std::to_string(j);
        vi.degree = -2;
        vi.mode = VarMode::Laurent;
        R.uvar[(size_t)j - 1] = (int)ros.vars.size();
        ros.vars.push_back(std::move(vi));
    }
    if (role != ZpnRole::Free) {
        VarInfo vi;
        vi.name = "u[" + std::to_string(k) + "]";  // stands for the [p^k]-series of u
        vi.degree = -2;
        vi.mode = role == ZpnRole::Complete ? VarMode::SeriesOnly : VarMode::LaurentSeries;
        vi.block = 1;
        ros.block_bound[1] = tp.N;
        R.svar = (int)ros.vars.size();
        ros.vars.push_back(std::move(vi));
    }
    R.wvar.assign((size_t)jm * tp.I, -1);
    for (long j = 1; j <= jm; ++j) {
        for (int i = 1; i <= tp.I; ++i) {
            VarInfo vi;
            vi.name = "u" + std::to_string(j) + "^(" + std::to_string(i) + ")";
            vi.degree = 2 * i - 2;
            vi.mode = VarMode::Polynomial;
            R.wvar[(size_t)(j - 1) * tp.I + (i - 1)] = (int)ros.vars.size();
            ros.vars.push_back(std::move(vi));
        }
    }
    R.ros = std::make_shared<Roster>(std::move(ros));

    if (role != ZpnRole::Free)
        R.relations.push_back(
            fgl_n_series(law, power_checked(p, n - k), s_var(R.ros, (size_t)R.svar)));
    return R;
}

DegPresentation zpn_presentation(const ZpnRing& R, int degree) {
    return graded_presentation(R.ros, R.relations, degree);
}

namespace {

void check_pair(const ZpnRing& R, const ZpnRing& S) {
    if (R.p != S.p || R.n != S.n) throw std::invalid_argument("zpn map: different towers");
    if (R.tp.D != S.tp.D || R.tp.E != S.tp.E || R.tp.N != S.tp.N || R.tp.I != S.tp.I ||
        R.tp.P != S.tp.P)
        throw std::invalid_argument("zpn map: different truncation windows");
    if (R.law.kind != S.law.kind || R.law.order != S.law.order ||
        R.law.base->max_degree != S.law.base->max_degree)
        throw std::invalid_argument("zpn map: different laws");
}

}  // namespace

RingMap zpn_psi(const ZpnRing& R, const ZpnRing& S) {
    check_pair(R, S);
    if (R.role != ZpnRole::Complete || S.role != ZpnRole::Localized || R.k != S.k)
        throw std::invalid_argument("zpn_psi: wants R_k -> S_k");
    RingMap f;
    f.sros = R.ros;
    f.dros = S.ros;
    f.wide = map_workspace(S.ros);
    f.img.resize(R.ros->nvars());
    f.powers.resize(R.ros->nvars());
    for (size_t v = 0; v < R.ros->nvars(); ++v) f.img[v] = s_var(S.ros, v);
    return f;
}

RingMap zpn_phi(const ZpnRing& R, const ZpnRing& S) {
    check_pair(R, S);
    bool from_free = R.role == ZpnRole::Free;
    if ((R.role != ZpnRole::Complete && !from_free) || S.role != ZpnRole::Localized ||
        R.k != S.k + 1)
        throw std::invalid_argument("zpn_phi: wants R_{k+1} -> S_k (or the free top ring)");

    RingMap f;
    f.sros = R.ros;
    f.dros = S.ros;
    f.wide = map_workspace(S.ros);
    f.img.resize(R.ros->nvars());
    f.powers.resize(R.ros->nvars());

    const FormalGroupLaw& law = S.law;
    const int I = S.tp.I;
    long pk = power_checked(S.p, S.k);
    Series us = s_var(S.ros, (size_t)S.svar);

    for (long j = 1; j <= R.jmax(); ++j) {
        long j0 = j % pk;
        long m = j / pk;
        if (m == 0) {  // same free generator on both sides
            f.img[(size_t)R.u_var((int)j)] = s_var(S.ros, (size_t)S.u_var((int)j0));
            for (int i = 1; i <= I; ++i)
                f.img[(size_t)R.w_var((int)j, i)] = s_var(S.ros, (size_t)S.w_var((int)j0, i));
            continue;
        }
        // Representative choice: [m] and [m-p] differ by a composite with
        // [p]_F u_[k], so when that is the target relation the balanced pick
        // keeps the image invertible (leading coefficient -1 instead of p-1).
        long mm = m;
        if (j0 == 0 && S.n - S.k == 1 && 2 * m > S.p) mm = m - S.p;
        Series v = fgl_n_series(law, mm, us);
        if (j0 == 0) {
            f.img[(size_t)R.u_var((int)j)] = v;
            for (int i = 1; i <= I; ++i)
                f.img[(size_t)R.w_var((int)j, i)] = euler_coeff(law, i, v);
            continue;
        }
        std::vector<int> cls((size_t)I);
        for (int i = 1; i <= I; ++i) cls[(size_t)i - 1] = S.w_var((int)j0, i);
        Series u_img;
        std::vector<Series> cimg;
        mixed_euler_image(law, S.ros, S.u_var((int)j0), cls, v, I, u_img, cimg);
        f.img[(size_t)R.u_var((int)j)] = std::move(u_img);
        for (int i = 1; i <= I; ++i)
            f.img[(size_t)R.w_var((int)j, i)] = std::move(cimg[(size_t)i - 1]);
    }
    if (!from_free) f.img[(size_t)R.svar] = fgl_n_series(law, S.p, us);
    return f;
}

ZpnStair assemble_zpn(int p, int n, const TruncParams& tp, const FormalGroupLaw& law) {
    ZpnStair Z;
    Z.p = p;
    Z.n = n;
    Z.tp = tp;
    Z.law = law;
    for (int k = 0; k < n; ++k) Z.R.push_back(build_zpn_ring(ZpnRole::Complete, p, n, k, tp, law));
    Z.R.push_back(build_zpn_ring(ZpnRole::Free, p, n, n, tp, law));
    for (int k = 0; k < n; ++k) Z.S.push_back(build_zpn_ring(ZpnRole::Localized, p, n, k, tp, law));
    for (int k = 0; k < n; ++k) {
        Z.psi.push_back(zpn_psi(Z.R[(size_t)k], Z.S[(size_t)k]));
        Z.phi.push_back(zpn_phi(Z.R[(size_t)k + 1], Z.S[(size_t)k]));
    }
    return Z;
}

void validate_zpn(const ZpnStair& Z) {
    for (size_t k = 0; k < Z.S.size(); ++k) {
        DegPresentation P2 = zpn_presentation(Z.S[k], -2);
        Lattice L(P2.dim());
        L.insert_rows(P2.relations);
        for (const Series& rel : Z.R[k].relations)
            if (!L.contains(series_coords(P2, map_series(Z.psi[k], rel))))
                throw std::runtime_error("validate_zpn: psi relation image leaves the lattice at S_" +
                                         std::to_string(k));
        for (const Series& rel : Z.R[k + 1].relations)
            if (!L.contains(series_coords(P2, map_series(Z.phi[k], rel))))
                throw std::runtime_error("validate_zpn: phi relation image leaves the lattice at S_" +
                                         std::to_string(k));
    }
}

LimitResult zpn_degree(const ZpnStair& Z, int degree) {
    LimitResult r;
    r.degree = degree;
    r.params = Z.tp;

    std::vector<DegPresentation> sp;
    sp.reserve(Z.R.size());
    for (const ZpnRing& blk : Z.R) {
        sp.push_back(zpn_presentation(blk, degree));
        r.truncated = r.truncated || sp.back().truncated;
        r.dims.push_back(sp.back().dim());
    }

    std::deque<DegPresentation> targets;  // pointer-stable storage
    std::vector<KernelConstraint> cons;
    for (size_t k = 0; k < Z.S.size(); ++k) {
        targets.push_back(zpn_presentation(Z.S[k], degree));
        DegPresentation& dp = targets.back();
        r.truncated = r.truncated || dp.truncated;
        KernelConstraint c;
        c.target_dim = dp.dim();
        c.target_relations = &dp.relations;
        c.terms.emplace_back(k, map_matrix(Z.psi[k], sp[k], dp, r.truncated));
        c.terms.emplace_back(k + 1, negate(map_matrix(Z.phi[k], sp[k + 1], dp, r.truncated)));
        cons.push_back(std::move(c));
    }

    r.witness = solve_constraints(r.dims, cons);
    std::vector<const ZMat*> rels;
    for (const auto& p : sp) rels.push_back(&p.relations);
    r.invariant_factors = present_quotient(r.witness, r.dims, rels).invariant_factors;
    return r;
}

std::vector<LimitResult> zpn_range(const ZpnStair& Z, int lo, int hi, int jobs) {
    if (hi < lo) return {};
    std::vector<LimitResult> out((size_t)(hi - lo + 1));
    if (jobs <= 1) {
        for (int d = lo; d <= hi; ++d) out[(size_t)(d - lo)] = zpn_degree(Z, d);
        return out;
    }
#pragma omp parallel num_threads(jobs)
    {
        ZpnStair local = assemble_zpn(Z.p, Z.n, Z.tp, Z.law);
#pragma omp for schedule(dynamic)
        for (int d = lo; d <= hi; ++d) out[(size_t)(d - lo)] = zpn_degree(local, d);
    }
    return out;
}

StabilizeReport zpn_stabilize(int p, int n, const FormalGroupLaw& law,
                              const std::vector<TruncParams>& schedule, int lo, int hi,
                              int jobs) {
    if (schedule.empty()) throw std::invalid_argument("zpn_stabilize: empty schedule");
    std::vector<std::vector<LimitResult>> steps;
    for (const TruncParams& tp : schedule) {
        FormalGroupLaw step_law = law;
        if (2 * tp.D != law.base->max_degree)
            step_law = make_law(law.kind, 2 * tp.D, tp.D + 1, law.base->modulus);
        ZpnStair Z = assemble_zpn(p, n, tp, step_law);
        steps.push_back(zpn_range(Z, lo, hi, jobs));
    }
    StabilizeReport rep;
    rep.last = std::move(steps.back());
    if (steps.size() >= 2) {
        rep.prev = std::move(steps[steps.size() - 2]);
        for (size_t i = 0; i < rep.last.size(); ++i)
            rep.last[i].stable = rep.last[i].invariant_factors == rep.prev[i].invariant_factors;
    }
    return rep;
}

std::string zpn_describe(const ZpnRing& R) {
    std::ostringstream os;
    os << (R.role == ZpnRole::Complete    ? "complete ring R_"
           : R.role == ZpnRole::Localized ? "localized ring S_"
                                          : "free top ring R^")
       << R.k << " of the order-" << power_checked(R.p, R.n) << " tower (p = " << R.p << ")\n";
    for (long j = 1; j <= R.jmax(); ++j)
        os << "  u" << j << "  invertible, with classes ^(1.." << R.tp.I << ")\n";
    if (R.svar >= 0)
        os << "  " << R.ros->vars[(size_t)R.svar].name
           << (R.role == ZpnRole::Localized ? "  invertible series\n" : "  series\n");
    os << R.relations.size() << " relation(s)\n";
    for (const auto& rel : R.relations) os << "  0 = " << s_to_string(rel) << "\n";
    return os.str();
}

// ---- cross-validation ----------------------------------------------------

namespace {

// Euler element of the full-group faithful character at a chain node, as the
// node presents it (single factor for cyclic singleton nodes; the general
// form mirrors the structure-map image builder).
Series node_euler_element(const GammaRing& node, const Character& chi) {
    std::vector<int> fs = decompose_character(node, chi, 0);
    if (fs.empty()) return s_zero(node.ros);
    bool has0 = node.reps[(size_t)fs[0]].level == 0;
    if (!has0) {
        std::vector<Series> terms;
        for (int ft : fs) terms.push_back(s_var(node.ros, (size_t)node.uvar[(size_t)ft]));
        return fgl_iterated_sum(node.law, terms);
    }
    if (fs.size() == 1) return s_var(node.ros, (size_t)node.uvar[(size_t)fs[0]]);
    std::vector<Series> rest;
    for (size_t q = 1; q < fs.size(); ++q)
        rest.push_back(s_var(node.ros, (size_t)node.uvar[(size_t)fs[q]]));
    Series v = fgl_iterated_sum(node.law, rest);
    std::vector<int> cls((size_t)node.tp.I);
    for (int i = 1; i <= node.tp.I; ++i) cls[(size_t)i - 1] = node.class_var(fs[0], i);
    Series u_img;
    std::vector<Series> cimg;
    mixed_euler_image(node.law, node.ros, node.uvar[(size_t)fs[0]], cls, v, node.tp.I, u_img, cimg);
    return u_img;
}

FormalGroupLaw step_law_for(const FormalGroupLaw& law, const TruncParams& tp) {
    if (2 * tp.D == law.base->max_degree) return law;
    return make_law(law.kind, 2 * tp.D, tp.D + 1, law.base->modulus);
}

}  // namespace

CrosscheckReport crosscheck_zpn(int p, int n, const FormalGroupLaw& law,
                                const std::vector<TruncParams>& schedule, int lo, int hi,
                                int jobs) {
    CrosscheckReport rep;
    rep.p = p;
    rep.n = n;
    FinAbGroup G{{power_checked(p, n)}};

    StabilizeReport chain = stabilize_range(G, Flavor::Reduced, law, schedule, lo, hi, jobs);
    StabilizeReport stair = zpn_stabilize(p, n, law, schedule, lo, hi, jobs);

    for (size_t i = 0; i < chain.last.size(); ++i) {
        CrosscheckRow row;
        row.degree = lo + (int)i;
        row.chain_factors = chain.last[i].invariant_factors;
        row.stair_factors = stair.last[i].invariant_factors;
        row.match = row.chain_factors == row.stair_factors;
        row.chain_stable = chain.last[i].stable;
        row.stair_stable = stair.last[i].stable;
        rep.all_match = rep.all_match && row.match;
        rep.all_stable = rep.all_stable && row.chain_stable && row.stair_stable;
        rep.rows.push_back(std::move(row));
    }

    if (lo <= -2 && -2 <= hi) {
        const TruncParams& tp = schedule.back();
        FormalGroupLaw sl = step_law_for(law, tp);
        Character chi{Exp{1}};  // faithful character of the cyclic group
        std::ostringstream note;

        Diagram D = assemble_diagram(G, Flavor::Reduced, tp, sl);
        ZVec cvec;
        note << "chain tuple:";
        for (size_t i = 0; i < D.singletons.size(); ++i) {
            const GammaRing& node = D.nodes[(size_t)D.singletons[i]];
            Series e = node_euler_element(node, chi);
            DegPresentation P = gamma_presentation(node, -2);
            ZVec seg = series_coords(P, e);
            cvec.insert(cvec.end(), seg.begin(), seg.end());
            note << (i ? "; " : " ") << chain_label(D.poset, D.singletons[i]) << ": "
                 << s_to_string(e);
        }
        const LimitResult& cl = chain.last[(size_t)(-2 - lo)];
        Lattice CW(cvec.size());
        CW.insert_rows(cl.witness);
        rep.euler_chain = CW.contains(cvec);

        ZpnStair Z = assemble_zpn(p, n, tp, sl);
        ZVec zvec;
        note << " | stair tuple:";
        for (size_t k = 0; k < Z.R.size(); ++k) {
            const ZpnRing& blk = Z.R[k];
            Series e = blk.svar >= 0 && blk.jmax() == 0 ? s_var(blk.ros, (size_t)blk.svar)
                                                        : s_var(blk.ros, (size_t)blk.u_var(1));
            DegPresentation P = zpn_presentation(blk, -2);
            ZVec seg = series_coords(P, e);
            zvec.insert(zvec.end(), seg.begin(), seg.end());
            note << (k ? "; " : " ")
                 << (blk.role == ZpnRole::Free ? "R^" + std::to_string(blk.k)
                                               : "R_" + std::to_string(blk.k))
                 << ": " << s_to_string(e);
        }
        const LimitResult& zl = stair.last[(size_t)(-2 - lo)];
        Lattice ZW(zvec.size());
        ZW.insert_rows(zl.witness);
        rep.euler_stair = ZW.contains(zvec);
        rep.euler_note = note.str();
    }
    return rep;
}

}  // namespace cobord
