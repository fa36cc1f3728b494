#pragma once

#include "linalg.hpp"
#include "series.hpp"

#include <map>
#include <utility>
#include <vector>

namespace cobord {

// Degreewise presentation of a ring slice as a finitely generated abelian
// group: the window monomials of one total degree, plus a relation lattice
// obtained by multiplying each relation generator by all window monomials of
// the complementary degree. Monomials are ordered lexicographically over the
// roster order (variable exponents first, then base exponents).
struct WinMonomial {
    Exp ve, be;
    bool operator==(const WinMonomial& o) const { return ve == o.ve && be == o.be; }
    bool operator<(const WinMonomial& o) const { return ve != o.ve ? ve < o.ve : be < o.be; }
};

struct DegPresentation {
    std::shared_ptr<const Roster> ros;
    int degree = 0;
    std::vector<WinMonomial> gens;
    std::map<std::pair<Exp, Exp>, size_t> index;
    ZMat relations;  // rows in gen coordinates (includes p * id for mod-p bases)
    bool truncated = false;

    size_t dim() const { return gens.size(); }
};

std::vector<WinMonomial> monomial_basis(const Roster& ros, int degree);

DegPresentation graded_presentation(std::shared_ptr<const Roster> ros,
                                    const std::vector<Series>& relations, int degree);

// invariant factors of the presented group (torsion ascending, zeros last)
std::vector<Int> smith_structure(const DegPresentation& P);

// coordinates of a homogeneous degree-d series in the basis; throws if a term
// is outside the basis or a coefficient is not an integer
ZVec series_coords(const DegPresentation& P, const Series& s);
Series coords_series(const DegPresentation& P, const ZVec& v);

// additive map between presented degrees
struct PresentedMap {
    const DegPresentation* src = nullptr;
    const DegPresentation* dst = nullptr;
    ZMat m;  // src.dim x dst.dim
    bool truncated = false;
};

// One linear condition on a tuple in  ⊕_i Z^dims[i] : the combination
// sum_i x_i * terms[i]  must land in the row span of *target_relations.
struct KernelConstraint {
    size_t target_dim = 0;
    const ZMat* target_relations = nullptr;          // nullptr = no relations
    std::vector<std::pair<size_t, ZMat>> terms;      // (block index, dims[i] x target_dim)
};

// basis (rows, Hermite form) of the lattice of tuples satisfying every constraint
ZMat solve_constraints(const std::vector<size_t>& dims, const std::vector<KernelConstraint>& cons);

// quotient of the solution lattice by block-diagonal relation lattices
struct QuotientStructure {
    ZMat rel_in_basis;
    std::vector<Int> invariant_factors;
};
QuotientStructure present_quotient(const ZMat& basis, const std::vector<size_t>& dims,
                                   const std::vector<const ZMat*>& block_rels);

}  // namespace cobord
