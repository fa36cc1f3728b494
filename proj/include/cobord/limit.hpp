#pragma once

#include "gamma.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cobord {

// Inverse-limit diagram of the chain rings over a chain poset: one ring per
// chain, with the structure map from each singleton sub-chain into every
// larger chain.  A compatible tuple is indexed by the singleton nodes; each
// larger node forces its singletons' images to agree modulo its relations, so
// the limit is a kernel problem over the singleton blocks.
struct Diagram {
    FinAbGroup G;
    Flavor flavor = Flavor::Reduced;
    TruncParams tp;
    FormalGroupLaw law;
    ChainPoset poset;
    std::vector<GammaRing> nodes;  // parallel to poset.chains
    std::vector<int> singletons;   // node indices of the length-one chains
    // per node: (position in `singletons`, map from that singleton's ring)
    std::vector<std::vector<std::pair<int, RingMap>>> maps_into;

    Diagram() = default;
    Diagram(const Diagram&) = delete;  // maps hold pointers into `nodes`
    Diagram& operator=(const Diagram&) = delete;
    Diagram(Diagram&&) = default;
    Diagram& operator=(Diagram&&) = default;

    size_t arrow_count() const;
};

Diagram assemble_diagram(const FinAbGroup& G, Flavor f, const TruncParams& tp,
                         const FormalGroupLaw& law);

// windowed soundness check: every source relation maps into the target's
// degree -2 relation lattice along every arrow; throws on failure
void validate_diagram(const Diagram& D);

struct LimitResult {
    int degree = 0;
    std::vector<Int> invariant_factors;  // torsion ascending, then zeros
    bool stable = false;                 // set by stabilize_range
    bool truncated = false;              // some window drop occurred on the way
    TruncParams params;
    std::vector<size_t> dims;  // singleton block dimensions
    ZMat witness;              // rows generate the limit lattice in block coords
};

LimitResult limit_degree(const Diagram& D, int degree);

// degrees lo..hi; jobs > 1 distributes degrees across OpenMP threads (each
// thread re-assembles the diagram privately), jobs <= 1 is the serial
// reference path; both produce identical results
std::vector<LimitResult> limit_range(const Diagram& D, int lo, int hi, int jobs = 1);

// The default two-step schedule raises the series-precision bound N by one
// per step and keeps the window shape (D, E, I, P) fixed.  Raising N refines
// every gluing condition and deepens the relation saturation while the
// degree-slice bases freeze once N clears the window-determined exponent
// ceiling, so agreement between consecutive entries is a meaningful check.
// The box bound E is deliberately not part of the schedule: at a node with
// two or more inverted generators the degree slice gains new monomials for
// every larger box (those graded pieces really are infinitely generated), so
// no truncation refinement in E could ever reach literal agreement.
std::vector<TruncParams> default_schedule(const TruncParams& start, int steps = 2);

// Recompute the range along the schedule; a degree is stable when its
// invariant factors agree between the final two schedule entries.  A length-1
// schedule can never certify stability.
struct StabilizeReport {
    std::vector<LimitResult> last;  // final entry, stable flags set
    std::vector<LimitResult> prev;  // previous entry (empty for length-1 schedules)
};

StabilizeReport stabilize_range(const FinAbGroup& G, Flavor f, const FormalGroupLaw& law,
                                const std::vector<TruncParams>& schedule, int lo, int hi,
                                int jobs = 1);

std::string subgroup_label(const ChainPoset& P, int sub);  // "e", "C2", "C2a", ...
std::string chain_label(const ChainPoset& P, int node);    // "{e < C2}"
// one generating tuple, rendered per singleton node
std::string render_witness(const Diagram& D, const LimitResult& r, size_t row);

}  // namespace cobord
