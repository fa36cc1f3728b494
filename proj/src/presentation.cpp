#include "cobord/presentation.hpp"

#include "cobord/lazard.hpp"

#include <algorithm>
#include <stdexcept>

namespace cobord {

std::vector<WinMonomial> monomial_basis(const Roster& ros, int degree) {
    size_t nv = ros.nvars();
    // static per-variable degree contribution ranges for suffix pruning
    std::vector<int> lo(nv), hi(nv);
    for (size_t v = 0; v < nv; ++v) {
        int dmin = 0, dmax = 0, emin = 0, emax = 0;
        switch (ros.vars[v].mode) {
            case VarMode::Polynomial:
                emin = 0;
                emax = ros.poly_bound;
                break;
            case VarMode::Laurent:
                emin = -ros.laurent_bound;
                emax = ros.laurent_bound;
                break;
            case VarMode::LaurentSeries:
                emin = -ros.laurent_bound;
                emax = ros.block_bound.at(ros.vars[v].block);
                break;
            case VarMode::SeriesOnly:
                emin = 0;
                emax = ros.block_bound.at(ros.vars[v].block);
                break;
        }
        int d = ros.vars[v].degree;
        dmin = std::min(emin * d, emax * d);
        dmax = std::max(emin * d, emax * d);
        lo[v] = dmin;
        hi[v] = dmax;
    }
    std::vector<int> sumlo(nv + 1, 0), sumhi(nv + 1, 0);
    for (size_t v = nv; v-- > 0;) {
        sumlo[v] = sumlo[v + 1] + lo[v];
        sumhi[v] = sumhi[v + 1] + hi[v];
    }

    std::vector<WinMonomial> out;
    Exp ve(nv, 0);
    std::map<int, int> block_used;
    int poly_used = 0;
    auto rec = [&](auto&& self, size_t v, int cur) -> void {
        // base part must realize degree - cur within [0, max_degree]
        if (v == nv) {
            int rem = degree - cur;
            if (rem < 0 || rem > ros.base->max_degree) return;
            for (const Exp& be : base_monomials(*ros.base, rem)) out.push_back(WinMonomial{ve, be});
            return;
        }
        if (cur + sumlo[v] > degree || cur + sumhi[v] + ros.base->max_degree < degree) return;
        const VarInfo& vi = ros.vars[v];
        int emin = 0, emax = 0;
        switch (vi.mode) {
            case VarMode::Polynomial:
                emin = 0;
                emax = ros.poly_bound - poly_used;
                break;
            case VarMode::Laurent:
                emin = -ros.laurent_bound;
                emax = ros.laurent_bound;
                break;
            case VarMode::LaurentSeries:
                emin = -ros.laurent_bound;
                emax = ros.block_bound.at(vi.block) - block_used[vi.block];
                break;
            case VarMode::SeriesOnly:
                emin = 0;
                emax = ros.block_bound.at(vi.block) - block_used[vi.block];
                break;
        }
        for (int e = emin; e <= emax; ++e) {
            ve[v] = e;
            int pos = e > 0 ? e : 0;
            bool blocky = vi.mode == VarMode::LaurentSeries || vi.mode == VarMode::SeriesOnly;
            if (blocky) block_used[vi.block] += pos;
            if (vi.mode == VarMode::Polynomial) poly_used += e;
            self(self, v + 1, cur + e * vi.degree);
            if (blocky) block_used[vi.block] -= pos;
            if (vi.mode == VarMode::Polynomial) poly_used -= e;
        }
        ve[v] = 0;
    };
    rec(rec, 0, 0);
    return out;
}

DegPresentation graded_presentation(std::shared_ptr<const Roster> ros,
                                    const std::vector<Series>& relations, int degree) {
    DegPresentation P;
    P.ros = ros;
    P.degree = degree;
    P.gens = monomial_basis(*ros, degree);
    for (size_t i = 0; i < P.gens.size(); ++i) P.index[{P.gens[i].ve, P.gens[i].be}] = i;

    Lattice lat(P.dim());
    for (const Series& r : relations) {
        if (s_is_zero(r)) continue;
        int delta = s_degree(r);
        P.truncated = P.truncated || r.truncated;
        for (const WinMonomial& m : monomial_basis(*ros, degree - delta)) {
            BasePoly bp;
            bp.t[m.be] = 1;
            Series mono = s_monomial(ros, m.ve, bp);
            Series prod = s_mul(mono, r);
            P.truncated = P.truncated || prod.truncated;
            if (s_is_zero(prod)) continue;
            lat.insert(series_coords(P, prod));
        }
    }
    if (ros->base->modulus != 0) {
        for (size_t i = 0; i < P.dim(); ++i) {
            ZVec row(P.dim(), 0);
            row[i] = ros->base->modulus;
            lat.insert(std::move(row));
        }
    }
    P.relations = lat.basis_mat();
    P.relations.ncols = P.dim();  // keep the column count even when empty
    return P;
}

std::vector<Int> smith_structure(const DegPresentation& P) {
    return quotient_invariants(P.dim(), P.relations);
}

ZVec series_coords(const DegPresentation& P, const Series& s) {
    ZVec v(P.dim(), 0);
    for (const auto& [ve, bp] : s.t)
        for (const auto& [be, c] : bp.t) {
            auto it = P.index.find({ve, be});
            if (it == P.index.end())
                throw std::runtime_error("series_coords: term outside the degree basis");
            if (!is_integer(c)) throw std::runtime_error("series_coords: non-integral coefficient");
            v[it->second] = c.get_num();
        }
    return v;
}

Series coords_series(const DegPresentation& P, const ZVec& v) {
    Series s = s_zero(P.ros);
    for (size_t i = 0; i < P.dim(); ++i) {
        if (sgn(v[i]) == 0) continue;
        BasePoly bp;
        bp.t[P.gens[i].be] = Rat(v[i]);
        auto it = s.t.find(P.gens[i].ve);
        if (it == s.t.end()) s.t[P.gens[i].ve] = bp;
        else it->second = bp_add(*P.ros->base, it->second, bp);
    }
    s_norm(s);
    return s;
}

ZMat solve_constraints(const std::vector<size_t>& dims, const std::vector<KernelConstraint>& cons) {
    size_t total = 0;
    for (size_t d : dims) total += d;
    // B starts as the (implicit) identity; materialize it only after the
    // first constraint so large free blocks never cost a dense n x n matrix.
    ZMat B;
    bool b_is_identity = true;
    for (const KernelConstraint& con : cons) {
        if (!b_is_identity && B.nrows == 0) break;
        // full constraint matrix C: total x target_dim
        ZMat C(total, con.target_dim);
        for (const auto& [blk, m] : con.terms) {
            size_t off = 0;
            for (size_t i = 0; i < blk; ++i) off += dims[i];
            if (m.nrows != dims[blk] || m.ncols != con.target_dim)
                throw std::invalid_argument("solve_constraints: term shape mismatch");
            for (size_t i = 0; i < m.nrows; ++i)
                for (size_t j = 0; j < m.ncols; ++j) C.a[off + i][j] += m.a[i][j];
        }
        ZMat A = b_is_identity ? std::move(C) : mat_mul(B, C);
        size_t relrows = con.target_relations ? con.target_relations->nrows : 0;
        size_t brows = b_is_identity ? total : B.nrows;
        ZMat stacked(0, con.target_dim);
        for (size_t i = 0; i < A.nrows; ++i) stacked.append_row(A.a[i]);
        for (size_t i = 0; i < relrows; ++i) stacked.append_row(con.target_relations->a[i]);
        ZMat K = left_kernel(stacked);
        // keep the y-part (coefficients on B), drop the relation multipliers
        ZMat newB(0, total);
        for (size_t i = 0; i < K.nrows; ++i) {
            ZVec y(K.a[i].begin(), K.a[i].begin() + brows);
            newB.append_row(b_is_identity ? std::move(y) : vec_mat(y, B));
        }
        B = hnf(newB);
        B.ncols = total;
        b_is_identity = false;
    }
    if (b_is_identity) return ZMat::identity(total);
    return B;
}

QuotientStructure present_quotient(const ZMat& basis, const std::vector<size_t>& dims,
                                   const std::vector<const ZMat*>& block_rels) {
    size_t total = 0;
    for (size_t d : dims) total += d;
    QuotientStructure Q;
    Q.rel_in_basis = ZMat(0, basis.nrows);
    LeftSolver solver(basis);
    size_t off = 0;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (block_rels[i]) {
            for (const ZVec& r : block_rels[i]->a) {
                ZVec full(total, 0);
                for (size_t j = 0; j < dims[i]; ++j) full[off + j] = r[j];
                ZVec x;
                if (!solver.solve(full, &x))
                    throw std::runtime_error(
                        "present_quotient: node relation is not inside the solution lattice");
                Q.rel_in_basis.append_row(std::move(x));
            }
        }
        off += dims[i];
    }
    Q.invariant_factors = quotient_invariants(basis.nrows, Q.rel_in_basis);
    return Q;
}

}  // namespace cobord
