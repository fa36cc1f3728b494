#pragma once

#include "group.hpp"

namespace cobord {

// Full: every chain of subgroups. Pairs: chains of length <= 2.
// Reduced: singletons plus gap-free pairs (no subgroup strictly between).
enum class Flavor { Full, Pairs, Reduced };

const char* flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& s);  // throws on unknown

struct ChainPoset {
    FinAbGroup G;
    Flavor flavor;
    std::vector<Subgroup> subs;
    std::vector<std::vector<int>> chains;  // strictly ascending subgroup indices
};

ChainPoset chain_poset(const FinAbGroup& G, Flavor f);

bool chain_subset(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace cobord
