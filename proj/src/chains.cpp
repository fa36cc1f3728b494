#include "cobord/chains.hpp"

#include <algorithm>
#include <stdexcept>

namespace cobord {

const char* flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Full: return "P";
        case Flavor::Pairs: return "P'";
        case Flavor::Reduced: return "P''";
    }
    return "?";
}

Flavor flavor_from_name(const std::string& s) {
    if (s == "P" || s == "full") return Flavor::Full;
    if (s == "P'" || s == "pairs") return Flavor::Pairs;
    if (s == "P''" || s == "reduced") return Flavor::Reduced;
    throw std::invalid_argument("unknown poset flavor: " + s);
}

ChainPoset chain_poset(const FinAbGroup& G, Flavor f) {
    ChainPoset P;
    P.G = G;
    P.flavor = f;
    P.subs = subgroups(G);
    size_t n = P.subs.size();
    // strict inclusion table (orders differ, so index order refines inclusion)
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && P.subs[i].order < P.subs[j].order && subgroup_leq(P.subs[i], P.subs[j]))
                lt[i][j] = true;
    auto gap_free = [&](size_t i, size_t j) {
        for (size_t t = 0; t < n; ++t)
            if (lt[i][t] && lt[t][j]) return false;
        return true;
    };
    std::vector<int> cur;
    auto rec = [&](auto&& self, size_t from) -> void {
        for (size_t j = from; j < n; ++j) {
            if (!cur.empty() && !lt[cur.back()][j]) continue;
            cur.push_back((int)j);
            bool keep = true;
            switch (f) {
                case Flavor::Full: break;
                case Flavor::Pairs: keep = cur.size() <= 2; break;
                case Flavor::Reduced:
                    keep = cur.size() == 1 ||
                           (cur.size() == 2 && gap_free((size_t)cur[0], (size_t)cur[1]));
                    break;
            }
            if (keep) {
                P.chains.push_back(cur);
                if (f == Flavor::Full || cur.size() < 2) self(self, j + 1);
            }
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(P.chains.begin(), P.chains.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return P;
}

bool chain_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace cobord
