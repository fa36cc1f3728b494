#pragma once

#include "linalg.hpp"

#include <string>
#include <vector>

namespace cobord {

// finite abelian group in invariant-factor form: Z/n1 x ... x Z/nr, n1 | n2 | ...
struct FinAbGroup {
    std::vector<long> factors;  // each > 1; empty = trivial group

    size_t rank() const { return factors.size(); }
    long order() const;
    std::string name() const;
    std::vector<Exp> elements() const;  // all tuples, lexicographically sorted
    Exp zero() const { return Exp(rank(), 0); }
    Exp add(const Exp& a, const Exp& b) const;
    Exp neg(const Exp& a) const;
};

long max_group_order();  // COBORD_MAX_GROUP_ORDER, default 72
FinAbGroup parse_group(const std::string& text, long max_order = max_group_order());

// subgroup, keyed by the Hermite basis of its preimage lattice in Z^r
struct Subgroup {
    ZMat lat;                // HNF rows, full rank r, contains diag(factors)
    long order = 1;
    std::vector<Exp> elems;  // sorted

    bool contains(const Exp& g) const;
};

std::vector<Subgroup> subgroups(const FinAbGroup& G);  // sorted by (order, lattice)
bool subgroup_leq(const Subgroup& a, const Subgroup& b);
bool subgroup_eq(const Subgroup& a, const Subgroup& b);
// index of the subgroup with the given element set (by lattice key); -1 if absent
int find_subgroup(const std::vector<Subgroup>& subs, const Subgroup& h);

// character chi_c(g) = sum_t c_t g_t / n_t (mod 1), c_t in [0, n_t)
struct Character {
    Exp c;
    bool operator==(const Character& o) const { return c == o.c; }
    bool operator<(const Character& o) const { return c < o.c; }
};

std::vector<Character> characters(const FinAbGroup& G);
Character char_mul(const FinAbGroup& G, const Character& a, const Character& b);
Character char_inv(const FinAbGroup& G, const Character& a);
bool char_is_trivial(const Character& a);
Rat char_value(const FinAbGroup& G, const Character& chi, const Exp& g);  // in [0,1)
bool char_trivial_on(const FinAbGroup& G, const Character& chi, const Subgroup& H);
// equal restrictions to H: chi1|_H == chi2|_H
bool char_equal_on(const FinAbGroup& G, const Character& a, const Character& b, const Subgroup& H);

// presentation of H1/H0 in Smith coordinates, with the evaluation map from
// G-tuples lying in H1
struct SubquotientView {
    FinAbGroup grp;            // abstract H1/H0
    ZMat B;                    // HNF lattice of H1
    ZMat V;                    // Smith column transform of the H0 lattice in B-coordinates
    std::vector<size_t> kept;  // coordinates with modulus > 1
    std::vector<Exp> h1_gens;  // generators of H1 as G-elements (lattice rows mod n)

    Exp map_elem(const FinAbGroup& G, const Exp& g) const;  // g must lie in H1
};

SubquotientView subquotient_view(const FinAbGroup& G, const Subgroup& H0, const Subgroup& H1);

// The canonical lift: among characters psi of G/H0 whose restriction to
// H1/H0 equals lambda, the one with the lexicographically smallest exponent
// tuple in the Smith coordinates of G/H0.
struct LiftedChar {
    Exp psi;        // exponent tuple over view(H0, G).grp
    Character chi;  // as a character of G (trivial on H0)
};

LiftedChar lift_character(const FinAbGroup& G, const Subgroup& H0, const Subgroup& H1,
                          const Character& lambda_on_view, const SubquotientView& view01,
                          const SubquotientView& view0G);

}  // namespace cobord
