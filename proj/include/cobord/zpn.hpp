#pragma once

#include "gamma.hpp"
#include "limit.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cobord {

// The specialized staircase presentation for the cyclic group of order p^n.
// Three ring shapes appear:
//   Complete  (R_k):  base[u_j^{+-1}, w_j^{(i)}][[u_[k]]] / ([p^{n-k}]_F u_[k])
//   Localized (S_k):  the same with u_[k] inverted
//   Free      (R^n):  base[u_j^{+-1}, w_j^{(i)}]        (j up to p^n - 1)
// where j runs over 1..p^k-1, u_[k] stands for the [p^k]-series of the global
// Euler variable, and w_j^{(i)} (degree 2i-2) is the i-th coefficient class
// of u_j --- the product b_j^{(i)} u_j of the localization-style generator
// b_j^{(i)} (degree 2i) with u_j, which keeps the monomial windows aligned
// with the chain-diagram rosters; b_j^{(i)} itself is recovered as
// w_j^{(i)} u_j^{-1} wherever u_j is invertible.
enum class ZpnRole { Complete, Localized, Free };

struct ZpnRing {
    ZpnRole role = ZpnRole::Complete;
    int p = 2, n = 1, k = 0;  // k = n for Free
    TruncParams tp;
    FormalGroupLaw law;

    std::shared_ptr<const Roster> ros;
    std::vector<int> uvar;          // j-1 -> var index of u_j
    std::vector<int> wvar;          // (j-1)*I + (i-1) -> var index of w_j^{(i)}
    int svar = -1;                  // var index of u_[k]; -1 for Free
    std::vector<Series> relations;  // [p^{n-k}]_F u_[k] unless Free

    long jmax() const { return (long)uvar.size(); }  // p^k - 1
    int u_var(int j) const;
    int w_var(int j, int i) const;
};

ZpnRing build_zpn_ring(ZpnRole role, int p, int n, int k, const TruncParams& tp,
                       const FormalGroupLaw& law);

// localization R_k -> S_k: identity on generator names
RingMap zpn_psi(const ZpnRing& R, const ZpnRing& S);

// restriction R_{k+1} -> S_k (or R^n -> S_{n-1}): splitting j = j0 + p^k m,
//   u_[k+1]  -> [p]_F u_[k]
//   u_j      -> u_{j0} +_F [m]_F u_[k]          (terms absent when j0/m = 0)
//   w_j^{(i)} -> the i-th coefficient class of that image
// When j0 = 0 and the target relation is [p]_F u_[k], the representative
// [m-p]_F u_[k] is substituted for m > p/2 so the image stays invertible in
// the window (the difference is a multiple of the relation).
RingMap zpn_phi(const ZpnRing& R, const ZpnRing& S);

// window slice as a finitely generated abelian group
DegPresentation zpn_presentation(const ZpnRing& R, int degree);

// The full staircase: R[0..n-1] the complete rings, R[n] the free top ring,
// S[0..n-1] the localized rings, with psi[k]: R[k] -> S[k] and
// phi[k]: R[k+1] -> S[k] (phi[n-1] from the free ring).
struct ZpnStair {
    int p = 2, n = 1;
    TruncParams tp;
    FormalGroupLaw law;
    std::vector<ZpnRing> R;  // size n+1
    std::vector<ZpnRing> S;  // size n
    std::vector<RingMap> psi, phi;
};

ZpnStair assemble_zpn(int p, int n, const TruncParams& tp, const FormalGroupLaw& law);

// checks that every relation image lands in the target relation lattice
void validate_zpn(const ZpnStair& Z);

// degree-d pullback over the staircase; dims/witness blocks follow R[0..n]
LimitResult zpn_degree(const ZpnStair& Z, int degree);

std::vector<LimitResult> zpn_range(const ZpnStair& Z, int lo, int hi, int jobs = 1);

// rerun over a truncation schedule; stable = last two invariant-factor lists agree
StabilizeReport zpn_stabilize(int p, int n, const FormalGroupLaw& law,
                              const std::vector<TruncParams>& schedule, int lo, int hi,
                              int jobs = 1);

std::string zpn_describe(const ZpnRing& R);

// ---- cross-validation against the chain-diagram limit ------------------

struct CrosscheckRow {
    int degree = 0;
    std::vector<Int> chain_factors, stair_factors;
    bool match = false;
    bool chain_stable = false, stair_stable = false;
};

struct CrosscheckReport {
    int p = 2, n = 1;
    std::vector<CrosscheckRow> rows;
    bool all_match = true;     // factor lists equal in every degree
    bool all_stable = true;    // both sides stabilized in every degree
    bool euler_chain = false;  // Euler tuple lies in the chain-limit witness
    bool euler_stair = false;  // Euler tuple lies in the staircase witness
    std::string euler_note;    // rendered tuples, for reports
};

// Runs both pipelines for the cyclic group of order p^n over the same
// truncation schedule and compares invariant factors degree by degree; when
// -2 lies in the range, also locates the Euler-class tuple (the restriction
// of the Euler class of the faithful character) in both witness lattices.
CrosscheckReport crosscheck_zpn(int p, int n, const FormalGroupLaw& law,
                                const std::vector<TruncParams>& schedule, int lo, int hi,
                                int jobs = 1);

}  // namespace cobord
