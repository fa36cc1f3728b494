#include "cobord/limit.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

namespace cobord {

size_t Diagram::arrow_count() const {
    size_t n = 0;
    for (const auto& mi : maps_into) n += mi.size();
    return n;
}

Diagram assemble_diagram(const FinAbGroup& G, Flavor f, const TruncParams& tp,
                         const FormalGroupLaw& law) {
    Diagram D;
    D.G = G;
    D.flavor = f;
    D.tp = tp;
    D.law = law;
    D.poset = chain_poset(G, f);
    D.nodes.reserve(D.poset.chains.size());
    for (const auto& ch : D.poset.chains) {
        std::vector<Subgroup> chain;
        for (int s : ch) chain.push_back(D.poset.subs[s]);
        D.nodes.push_back(build_gamma(G, chain, tp, law));
    }
    std::vector<int> sing_of_sub(D.poset.subs.size(), -1);
    for (size_t n = 0; n < D.poset.chains.size(); ++n)
        if (D.poset.chains[n].size() == 1) {
            sing_of_sub[D.poset.chains[n][0]] = (int)D.singletons.size();
            D.singletons.push_back((int)n);
        }
    D.maps_into.resize(D.nodes.size());
    for (size_t n = 0; n < D.poset.chains.size(); ++n) {
        if (D.poset.chains[n].size() == 1) continue;
        for (int s : D.poset.chains[n]) {
            int pos = sing_of_sub[s];
            if (pos < 0) throw std::logic_error("assemble_diagram: poset lacks a singleton chain");
            const GammaRing& src = D.nodes[D.singletons[pos]];
            D.maps_into[n].emplace_back(pos, structure_map(src, D.nodes[n]));
        }
    }
    return D;
}

void validate_diagram(const Diagram& D) {
    for (size_t n = 0; n < D.nodes.size(); ++n) {
        if (D.maps_into[n].empty()) continue;
        DegPresentation P2 = gamma_presentation(D.nodes[n], -2);
        Lattice L(P2.dim());
        L.insert_rows(P2.relations);
        for (const auto& [pos, f] : D.maps_into[n]) {
            for (const Series& rel : D.nodes[(size_t)D.singletons[(size_t)pos]].relations) {
                Series im = map_series(f, rel);
                if (!L.contains(series_coords(P2, im)))
                    throw std::runtime_error("validate_diagram: a relation image leaves the relation lattice at node " +
                                             chain_label(D.poset, (int)n));
            }
        }
    }
}

namespace {

ZMat negate(ZMat m) {
    for (auto& row : m.a)
        for (auto& x : row) x = -x;
    return m;
}

}  // namespace

LimitResult limit_degree(const Diagram& D, int degree) {
    LimitResult r;
    r.degree = degree;
    r.params = D.tp;

    std::vector<DegPresentation> sp;
    sp.reserve(D.singletons.size());
    for (int n : D.singletons) {
        sp.push_back(gamma_presentation(D.nodes[n], degree));
        r.truncated = r.truncated || sp.back().truncated;
        r.dims.push_back(sp.back().dim());
    }

    std::deque<DegPresentation> targets;  // pointer-stable storage
    std::vector<KernelConstraint> cons;
    for (size_t n = 0; n < D.nodes.size(); ++n) {
        const auto& mi = D.maps_into[n];
        if (mi.empty()) continue;
        targets.push_back(gamma_presentation(D.nodes[n], degree));
        DegPresentation& dp = targets.back();
        r.truncated = r.truncated || dp.truncated;
        std::vector<ZMat> M;
        M.reserve(mi.size());
        for (const auto& [pos, f] : mi) M.push_back(map_matrix(f, sp[pos], dp, r.truncated));
        for (size_t i = 0; i + 1 < mi.size(); ++i) {
            KernelConstraint c;
            c.target_dim = dp.dim();
            c.target_relations = &dp.relations;
            c.terms.emplace_back(mi[i].first, M[i]);
            c.terms.emplace_back(mi[i + 1].first, negate(M[i + 1]));
            cons.push_back(std::move(c));
        }
    }

    r.witness = solve_constraints(r.dims, cons);
    std::vector<const ZMat*> rels;
    for (const auto& p : sp) rels.push_back(&p.relations);
    r.invariant_factors = present_quotient(r.witness, r.dims, rels).invariant_factors;
    return r;
}

std::vector<LimitResult> limit_range(const Diagram& D, int lo, int hi, int jobs) {
    if (hi < lo) return {};
    std::vector<LimitResult> out((size_t)(hi - lo + 1));
    if (jobs <= 1) {
        for (int d = lo; d <= hi; ++d) out[(size_t)(d - lo)] = limit_degree(D, d);
        return out;
    }
#pragma omp parallel num_threads(jobs)
    {
        Diagram local = assemble_diagram(D.G, D.flavor, D.tp, D.law);
#pragma omp for schedule(dynamic)
        for (int d = lo; d <= hi; ++d) out[(size_t)(d - lo)] = limit_degree(local, d);
    }
    return out;
}

std::vector<TruncParams> default_schedule(const TruncParams& start, int steps) {
    if (steps < 1) throw std::invalid_argument("default_schedule: need at least one step");
    std::vector<TruncParams> s;
    TruncParams t = start;
    for (int i = 0; i < steps; ++i) {
        s.push_back(t);
        t.N += 1;
    }
    return s;
}

StabilizeReport stabilize_range(const FinAbGroup& G, Flavor f, const FormalGroupLaw& law,
                                const std::vector<TruncParams>& schedule, int lo, int hi,
                                int jobs) {
    if (schedule.empty()) throw std::invalid_argument("stabilize_range: empty schedule");
    std::vector<std::vector<LimitResult>> steps;
    for (const TruncParams& tp : schedule) {
        FormalGroupLaw step_law = law;
        if (2 * tp.D != law.base->max_degree)
            step_law = make_law(law.kind, 2 * tp.D, tp.D + 1, law.base->modulus);
        Diagram D = assemble_diagram(G, f, tp, step_law);
        steps.push_back(limit_range(D, lo, hi, jobs));
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

std::string subgroup_label(const ChainPoset& P, int sub) {
    long order = P.subs[sub].order;
    if (order == 1) return "e";
    int same = 0, before = 0;
    for (size_t i = 0; i < P.subs.size(); ++i) {
        if (P.subs[i].order != order) continue;
        ++same;
        if ((int)i < sub) ++before;
    }
    std::string s = "C" + std::to_string(order);
    if (same > 1) s += (char)('a' + before);
    return s;
}

std::string chain_label(const ChainPoset& P, int node) {
    std::string s = "{";
    const auto& ch = P.chains[node];
    for (size_t i = 0; i < ch.size(); ++i) {
        if (i) s += " < ";
        s += subgroup_label(P, ch[i]);
    }
    return s + "}";
}

std::string render_witness(const Diagram& D, const LimitResult& r, size_t row) {
    std::ostringstream os;
    size_t off = 0;
    for (size_t i = 0; i < D.singletons.size(); ++i) {
        DegPresentation P = gamma_presentation(D.nodes[D.singletons[i]], r.degree);
        ZVec seg(r.witness.a[row].begin() + off, r.witness.a[row].begin() + off + r.dims[i]);
        off += r.dims[i];
        if (i) os << ";  ";
        os << chain_label(D.poset, D.singletons[i]) << ": " << s_to_string(coords_series(P, seg));
    }
    return os.str();
}

}  // namespace cobord
