#pragma once

#include "fgl.hpp"
#include "linalg.hpp"

#include <memory>
#include <vector>

namespace cobord {

// Degreewise extraction of polynomial generators for the coefficient ring
// from the universal-rational law: in each degree 2n the lattice spanned by
// products of law coefficients has rank p(n); modulo the decomposable
// sublattice it is free of rank one, and x_n is the canonical generator
// (residue reduced by the decomposable lattice, leading coefficient positive).
struct IntegralGenerators {
    int max_degree;
    std::shared_ptr<const GradedBase> mbase;  // rational coordinates m_i
    std::shared_ptr<const GradedBase> xbase;  // integral generators x_i
    std::vector<BasePoly> x_in_m;             // x_in_m[n-1] = x_n over mbase

    BasePoly to_m(const BasePoly& px) const;  // substitute x_n -> x_in_m[n-1]
    BasePoly to_x(const BasePoly& pm) const;  // throws if not integral on the x side
};

IntegralGenerators integral_generators(int max_degree);

// Universal law with coefficients written integrally in the x_n
// (ModPReduced when p != 0: same table with coefficients reduced mod p).
FormalGroupLaw make_integral_law(int max_degree, int order, long p = 0);

// all monomials of the given degree in the base generators
std::vector<Exp> base_monomials(const GradedBase& b, int degree);

}  // namespace cobord
