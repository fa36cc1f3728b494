#include "cobord/lazard.hpp"

#include <algorithm>
#include <stdexcept>

namespace cobord {

std::vector<Exp> base_monomials(const GradedBase& b, int degree) {
    std::vector<Exp> out;
    if (degree < 0) return out;
    Exp cur(b.ngens(), 0);
    // recurse over generators in order; exponent of the first free generator outermost
    auto rec = [&](auto&& self, size_t g, int rem) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        if (g == b.ngens()) return;
        int dg = b.degrees[g];
        for (int e = 0; e * dg <= rem; ++e) {
            cur[g] = e;
            self(self, g + 1, rem - e * dg);
        }
        cur[g] = 0;
    };
    rec(rec, 0, degree);
    return out;
}

namespace {

// coordinates of a homogeneous polynomial in the listed monomials; entries must be integers
ZVec coords_of(const BasePoly& p, const std::vector<Exp>& monos) {
    ZVec v(monos.size(), 0);
    auto remaining = p.t;
    for (size_t k = 0; k < monos.size(); ++k) {
        auto it = remaining.find(monos[k]);
        if (it == remaining.end()) continue;
        if (!is_integer(it->second)) throw std::runtime_error("coords_of: non-integer coefficient");
        v[k] = it->second.get_num();
        remaining.erase(it);
    }
    if (!remaining.empty()) throw std::runtime_error("coords_of: monomial outside the expected degree");
    return v;
}

BasePoly poly_of(const ZVec& v, const std::vector<Exp>& monos, const GradedBase& b) {
    BasePoly p;
    for (size_t k = 0; k < monos.size(); ++k)
        if (sgn(v[k]) != 0) p.t[monos[k]] = Rat(v[k]);
    bp_norm(b, p);
    return p;
}

// number of partitions of n
size_t partition_count(int n) {
    std::vector<size_t> p(n + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int m = part; m <= n; ++m) p[m] += p[m - part];
    return p[n];
}

struct Letter {
    int i, j, w;        // a_{ij}, weight w = i + j - 1
    BasePoly val;       // over mbase
};

}  // namespace

IntegralGenerators integral_generators(int max_degree) {
    IntegralGenerators G;
    G.max_degree = max_degree;
    int d = max_degree / 2;
    FormalGroupLaw law = make_law(BaseKind::UniversalRational, max_degree, d + 1);
    G.mbase = law.base;
    G.xbase = make_base(BaseKind::UniversalIntegral, max_degree);
    const GradedBase& mb = *G.mbase;

    std::vector<Letter> letters;
    for (int i = 1; i <= d; ++i)
        for (int j = 1; i + j <= d + 1; ++j) {
            if (law.a[i][j].is_zero()) continue;
            if (!bp_is_integral(law.a[i][j]))
                throw std::runtime_error("integral_generators: law coefficient not in Z[m]");
            letters.push_back({i, j, i + j - 1, law.a[i][j]});
        }

    G.x_in_m.resize(d);
    for (int n = 1; n <= d; ++n) {
        std::vector<Exp> monos = base_monomials(mb, 2 * n);
        // every product of law coefficients of total weight n, with its length
        std::vector<std::pair<BasePoly, int>> products;
        BasePoly one = bp_const(mb, 1);
        auto rec = [&](auto&& self, size_t from, int rem, const BasePoly& acc, int len) -> void {
            if (rem == 0) {
                if (len > 0) products.emplace_back(acc, len);
                return;
            }
            for (size_t k = from; k < letters.size(); ++k)
                if (letters[k].w <= rem)
                    self(self, k, rem - letters[k].w, bp_mul(mb, acc, letters[k].val), len + 1);
        };
        rec(rec, 0, n, one, 0);

        Lattice full(monos.size()), dec(monos.size());
        for (const auto& [p, len] : products) {
            ZVec v = coords_of(p, monos);
            full.insert(v);
            if (len >= 2) dec.insert(std::move(v));
        }
        if (full.rank() != partition_count(n))
            throw std::runtime_error("integral_generators: coefficient lattice has unexpected rank");

        // decomposables in coordinates of the full lattice basis
        ZMat rel(0, full.rank());
        for (const ZVec& row : dec.basis()) {
            std::vector<Int> q;
            ZVec rem = full.reduce(row, &q);
            if (!is_zero(rem))
                throw std::runtime_error("integral_generators: decomposable escaped the lattice");
            rel.append_row(std::move(q));
        }
        if (quotient_invariants(full.rank(), rel) != std::vector<Int>{Int(0)})
            throw std::runtime_error("integral_generators: indecomposable quotient is not free of rank 1");

        // pull a generator of the free summand back through the Smith transform
        SmithResult s = smith(rel, true);
        size_t freepos = 0;
        if (rel.nrows > 0) {
            while (freepos < s.d.size() && sgn(s.d[freepos]) != 0) ++freepos;
        }
        ZVec target(full.rank(), 0);
        target[freepos] = 1;  // unit vector in the y = z * V coordinates
        ZVec z;
        if (rel.nrows > 0) {
            if (!solve_left(s.V, target, &z))
                throw std::runtime_error("integral_generators: Smith transform not invertible");
        } else {
            z = target;
        }
        // z is in full-basis coordinates; canonicalize modulo the decomposable lattice
        Lattice decfull(monos.size());
        for (const ZVec& row : dec.basis()) decfull.insert(row);
        ZVec xm(monos.size(), 0);
        for (size_t i = 0; i < z.size(); ++i)
            for (size_t k = 0; k < monos.size(); ++k) xm[k] += z[i] * full.basis()[i][k];
        ZVec r1 = decfull.reduce(xm);
        ZVec neg = xm;
        for (Int& v : neg) v = -v;
        ZVec r2 = decfull.reduce(neg);
        auto leading_sign = [](const ZVec& v) {
            for (const Int& x : v)
                if (sgn(x) != 0) return sgn(x);
            return 0;
        };
        ZVec chosen = (leading_sign(r1) > 0) ? r1 : r2;
        if (leading_sign(chosen) <= 0)
            throw std::runtime_error("integral_generators: empty canonical representative");
        G.x_in_m[n - 1] = poly_of(chosen, monos, mb);
    }
    return G;
}

BasePoly IntegralGenerators::to_m(const BasePoly& px) const {
    const GradedBase& mb = *mbase;
    BasePoly acc;
    for (const auto& [e, c] : px.t) {
        BasePoly term = bp_const(mb, c);
        for (size_t g = 0; g < e.size(); ++g)
            for (int k = 0; k < e[g]; ++k) term = bp_mul(mb, term, x_in_m[g]);
        acc = bp_add(mb, acc, term);
    }
    return acc;
}

BasePoly IntegralGenerators::to_x(const BasePoly& pm) const {
    // split into homogeneous components and solve degree by degree
    std::map<int, BasePoly> comp;
    for (const auto& [e, c] : pm.t) comp[mbase->degree_of(e)].t[e] = c;
    BasePoly out;
    for (auto& [deg, p] : comp) {
        std::vector<Exp> monos = base_monomials(*mbase, deg);
        std::vector<Exp> xmonos = base_monomials(*xbase, deg);
        ZMat rows(0, monos.size());
        for (const Exp& xe : xmonos) {
            BasePoly xp;
            xp.t[xe] = 1;
            rows.append_row(coords_of(to_m(xp), monos));
        }
        ZVec b = coords_of(p, monos);
        ZVec sol;
        if (!solve_left(rows, b, &sol))
            throw std::runtime_error("to_x: polynomial is not integral in the x generators");
        for (size_t k = 0; k < xmonos.size(); ++k)
            if (sgn(sol[k]) != 0) out.t[xmonos[k]] = Rat(sol[k]);
    }
    bp_norm(*xbase, out);
    return out;
}

FormalGroupLaw make_integral_law(int max_degree, int order, long p) {
    int d = max_degree / 2;
    if (order > d + 1)
        throw std::invalid_argument(
            "make_law: order exceeds what the degree window supports (need order <= max_degree/2 + 1)");
    FormalGroupLaw ml = make_law(BaseKind::UniversalRational, max_degree, order);
    IntegralGenerators G = integral_generators(max_degree);
    FormalGroupLaw F;
    F.kind = p == 0 ? BaseKind::UniversalIntegral : BaseKind::ModPReduced;
    F.order = order;
    F.complete = (order == d + 1);
    F.base = p == 0 ? G.xbase : make_base(BaseKind::ModPReduced, max_degree, p);
    F.a.assign(order + 1, {});
    for (int i = 0; i <= order; ++i) F.a[i].assign(order + 1 - i, BasePoly{});
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) {
            if (ml.a[i][j].is_zero()) continue;
            // the mod-p base shares the exponent layout of the integral base
            BasePoly r;
            r.t = G.to_x(ml.a[i][j]).t;
            bp_norm(*F.base, r);
            F.a[i][j] = r;
        }
    return F;
}

}  // namespace cobord
