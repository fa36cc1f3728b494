#pragma once

#include "chains.hpp"
#include "fgl.hpp"
#include "presentation.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cobord {

// Truncation window for one diagram run.  D bounds base degrees (|m_n| or
// |x_n| up to 2D), E boxes Laurent exponents, N bounds each series block,
// I is the number of Euler-coefficient classes per invertible variable,
// P bounds the total exponent of the polynomial class sector.
struct TruncParams {
    int D = 3;
    int E = 2;
    int N = 4;
    int I = 4;
    int P = 2;
};

// One ring generator u_chi: the canonical lift of a nontrivial character of
// H[level+1]/H[level] to a character of G trivial on H[level].
struct RepInfo {
    int level = 0;
    LiftedChar lift;     // psi in Smith coordinates of G/H[level]; chi on G
    std::string name;    // "u[psi_1,...,psi_r]"
};

// The ring Gamma(S) attached to a chain S of subgroups of G, presented over
// the window: for H = [trivial] + S + [G] (no deduplication, so repeated
// entries give empty levels),
//   level 0    -> Laurent variables, plus polynomial classes u^{(1..I)},
//   level 1..k-1 -> Laurent-series variables (block = level),
//   level k    -> series-only variables (block = k),
// with one relation F(u_r, u_s) - (iterated F-sum of the factors of
// chi_r chi_s) for every pair r <= s at each level >= 1.
struct GammaRing {
    FinAbGroup G;
    std::vector<Subgroup> chain;  // strictly ascending subgroups of G
    std::vector<Subgroup> H;      // [trivial] + chain + [G], size k + 2
    int k = 0;                    // chain length
    TruncParams tp;
    FormalGroupLaw law;

    std::vector<RepInfo> reps;    // sorted by (level, psi)
    std::shared_ptr<const Roster> ros;  // u-vars in rep order, then classes
    std::vector<int> uvar;        // rep index -> roster var index
    std::vector<int> cvar;        // rep * I + (i-1) -> class var index, or -1
    std::vector<Series> relations;  // homogeneous of degree -2

    int class_var(int rep, int i) const;  // var index of u_rep^{(i)}, i in 1..I
};

// law.base supplies the coefficient ring; law.order should be tp.D + 1 for
// integral kinds (as much of the universal law as the window supports).
GammaRing build_gamma(const FinAbGroup& G, const std::vector<Subgroup>& chain,
                      const TruncParams& tp, const FormalGroupLaw& law);

// Greedy factorization of a character trivial on H[start_level]: ascend the
// levels, at each one splitting off the unique generator with the same
// restriction to H[level+1] when the remainder is nontrivial there.  Returns
// rep indices in ascending level order (possibly empty for the trivial
// character, whose Euler element is 0).
std::vector<int> decompose_character(const GammaRing& R, const Character& chi, int start_level);

// Ring homomorphism between roster windows, determined by where each source
// variable goes.  Images of negative powers are reciprocals computed on demand
// and cached.  Internally products run over a Laurent box enlarged by the
// total completed-weight caps (any reciprocal tail deeper than that can never
// multiply back into the reported window), and map_series restricts the
// result at the end.
struct RingMap {
    std::shared_ptr<const Roster> sros, dros;
    std::vector<Series> img;  // per src roster var, homogeneous of its degree

    std::shared_ptr<const Roster> wide;                 // internal working window
    mutable std::vector<std::map<int, Series>> powers;  // cached on wide

    const Series& power(size_t v, int k) const;  // wide-roster series
};

// Widened working window shared by every map into dros: reciprocal tails
// deeper than the completed-weight caps cannot multiply back into the window.
std::shared_ptr<const Roster> map_workspace(const std::shared_ptr<const Roster>& dros);

// Images of an invertible variable that factors as u_M0 +_F v with u_M0 free
// (carrying classes cls_M0[0..I-1] on the target) and v completed: img_u gets
// the variable image expanded with the classes of M0, img_cls[i-1] the image
// of the i-th coefficient class, with truncation flagged where the window
// drops the class tail.
void mixed_euler_image(const FormalGroupLaw& law, const std::shared_ptr<const Roster>& ros,
                       int uvar_M0, const std::vector<int>& cls_M0, const Series& v, int I,
                       Series& img_u, std::vector<Series>& img_cls);

// The map Gamma(S) -> Gamma(T) induced by a chain inclusion S subseteq T:
// each u_chi goes to the Euler element of chi factored in T starting at the
// level of T whose subgroup matches, and classes follow the addition law.
RingMap structure_map(const GammaRing& S, const GammaRing& T);

Series map_series(const RingMap& f, const Series& a);

// matrix of the map on one degree slice: row i = coordinates in dp of the
// image of source generator i of sp; truncation is or-ed into `truncated`
ZMat map_matrix(const RingMap& f, const DegPresentation& sp, const DegPresentation& dp,
                bool& truncated);

// window slice of Gamma as a finitely generated abelian group
DegPresentation gamma_presentation(const GammaRing& R, int degree);

std::string gamma_describe(const GammaRing& R);  // human-readable generator/relation list

}  // namespace cobord
