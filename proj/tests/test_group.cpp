#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cobord/chains.hpp"

#include <set>

using namespace cobord;

namespace {

// brute-force oracle: subgroups = subsets closed under addition (small groups)
std::set<std::vector<Exp>> subgroups_bruteforce(const FinAbGroup& G) {
    std::vector<Exp> elems = G.elements();
    size_t n = elems.size();
    REQUIRE(n <= 16);
    std::set<std::vector<Exp>> out;
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        std::vector<Exp> sub;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i)) sub.push_back(elems[i]);
        if (sub.empty()) continue;
        bool closed = true;
        std::set<Exp> inset(sub.begin(), sub.end());
        if (!inset.count(G.zero())) continue;
        for (const Exp& a : sub)
            for (const Exp& b : sub)
                if (!inset.count(G.add(a, b))) {
                    closed = false;
                    break;
                }
        if (closed) out.insert(sub);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_group: invariant-factor normal form") {
    CHECK(parse_group("Z/4").factors == std::vector<long>{4});
    CHECK(parse_group("Z/2 x Z/3").factors == std::vector<long>{6});
    CHECK(parse_group("Z/2 x Z/2").factors == (std::vector<long>{2, 2}));
    CHECK(parse_group("Z/2\xc3\x97Z/4").factors == (std::vector<long>{2, 4}));
    CHECK(parse_group("Z/6 x Z/4").factors == (std::vector<long>{2, 12}));
    CHECK(parse_group("Z/2^3").factors == std::vector<long>{8});
    CHECK(parse_group("8").factors == std::vector<long>{8});
    CHECK(parse_group("e").factors.empty());
    CHECK(parse_group("1").factors.empty());
    CHECK(parse_group("trivial").factors.empty());
    CHECK(parse_group("Z/1 x Z/5").factors == std::vector<long>{5});
    CHECK(parse_group("Z/4").name() == "Z/4");
    CHECK(parse_group("e").name() == "e");
    CHECK_THROWS_AS(parse_group("Z/"), std::invalid_argument);
    CHECK_THROWS_AS(parse_group("Z/2 y Z/3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_group("Z/73"), std::invalid_argument);  // above the order bound
    CHECK_NOTHROW(parse_group("Z/73", 100));
}

TEST_CASE("subgroups: counts and brute-force oracle") {
    CHECK(subgroups(parse_group("Z/4")).size() == 3);
    CHECK(subgroups(parse_group("Z/2 x Z/2")).size() == 5);
    CHECK(subgroups(parse_group("Z/6")).size() == 4);
    CHECK(subgroups(parse_group("Z/8")).size() == 4);
    CHECK(subgroups(parse_group("Z/2 x Z/4")).size() == 8);
    CHECK(subgroups(FinAbGroup{}).size() == 1);
    for (const char* name : {"Z/4", "Z/2 x Z/2", "Z/6", "Z/2 x Z/4", "Z/12"}) {
        FinAbGroup G = parse_group(name);
        auto got = subgroups(G);
        auto expect = subgroups_bruteforce(G);
        REQUIRE(got.size() == expect.size());
        for (const Subgroup& s : got) {
            CHECK(expect.count(s.elems) == 1);
            CHECK((long)s.elems.size() == s.order);
        }
        // sorted ascending by order, trivial first, full group last
        CHECK(got.front().order == 1);
        CHECK(got.back().order == G.order());
    }
}

TEST_CASE("subgroup inclusion and quotients") {
    FinAbGroup G = parse_group("Z/4");
    auto subs = subgroups(G);  // e, Z/2, Z/4
    REQUIRE(subs.size() == 3);
    CHECK(subgroup_leq(subs[0], subs[1]));
    CHECK(subgroup_leq(subs[1], subs[2]));
    CHECK(!subgroup_leq(subs[2], subs[1]));
    auto v02 = subquotient_view(G, subs[0], subs[2]);  // G/e = Z/4
    CHECK(v02.grp.factors == std::vector<long>{4});
    auto v12 = subquotient_view(G, subs[1], subs[2]);  // G/(Z/2) = Z/2
    CHECK(v12.grp.factors == std::vector<long>{2});
    auto v01 = subquotient_view(G, subs[0], subs[1]);  // Z/2 / e
    CHECK(v01.grp.factors == std::vector<long>{2});
    CHECK_THROWS_AS(subquotient_view(G, subs[1], subs[0]), std::invalid_argument);
    // map_elem is a homomorphism on H1
    for (const Exp& a : subs[2].elems)
        for (const Exp& b : subs[2].elems) {
            Exp lhs = v02.map_elem(G, G.add(a, b));
            Exp rhs = v02.grp.add(v02.map_elem(G, a), v02.map_elem(G, b));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("subquotient of a composite: V4 and Z/2 x Z/4") {
    FinAbGroup G = parse_group("Z/2 x Z/4");
    auto subs = subgroups(G);
    const Subgroup* full = &subs.back();
    for (const Subgroup& h : subs) {
        auto v = subquotient_view(G, h, *full);
        CHECK(v.grp.order() == G.order() / h.order);
    }
}

TEST_CASE("characters: group structure and values") {
    FinAbGroup G = parse_group("Z/2 x Z/2");
    auto chars = characters(G);
    CHECK(chars.size() == 4);
    for (const Character& a : chars) {
        CHECK(char_is_trivial(char_mul(G, a, char_inv(G, a))));
        if (!char_is_trivial(a)) {
            bool hit = false;
            for (const Exp& g : G.elements())
                if (sgn(char_value(G, a, g)) != 0) hit = true;
            CHECK(hit);
        }
    }
    Character x{{1, 0}};
    CHECK(char_value(G, x, Exp{1, 0}) == Rat(1, 2));
    CHECK(char_value(G, x, Exp{0, 1}) == Rat(0));
}

TEST_CASE("lift_character: pinned Z/4 cases") {
    FinAbGroup G = parse_group("Z/4");
    auto subs = subgroups(G);
    auto v01 = subquotient_view(G, subs[0], subs[1]);
    auto v0G = subquotient_view(G, subs[0], subs[2]);
    // sign character of Z/2 lifted to G/e: candidates chi^1 and chi^3, canonical chi^1
    LiftedChar l = lift_character(G, subs[0], subs[1], Character{{1}}, v01, v0G);
    CHECK(l.chi.c == Exp{1});
    CHECK(l.psi == Exp{1});
    // nontrivial character of (Z/4)/(Z/2) lifts uniquely to chi^2 of G/(Z/2)
    auto v12 = subquotient_view(G, subs[1], subs[2]);
    auto v1G = subquotient_view(G, subs[1], subs[2]);
    LiftedChar l2 = lift_character(G, subs[1], subs[2], Character{{1}}, v12, v1G);
    CHECK(l2.chi.c == Exp{2});
    // the lift restricts correctly: trivial on H0, matching on H1
    CHECK(char_trivial_on(G, l2.chi, subs[1]));
}

TEST_CASE("chain posets: pinned counts") {
    FinAbGroup z4 = parse_group("Z/4");
    CHECK(chain_poset(z4, Flavor::Full).chains.size() == 7);
    CHECK(chain_poset(z4, Flavor::Pairs).chains.size() == 6);
    CHECK(chain_poset(z4, Flavor::Reduced).chains.size() == 5);
    FinAbGroup v4 = parse_group("Z/2 x Z/2");
    CHECK(chain_poset(v4, Flavor::Full).chains.size() == 15);
    CHECK(chain_poset(v4, Flavor::Reduced).chains.size() == 11);
    FinAbGroup z6 = parse_group("Z/6");
    CHECK(chain_poset(z6, Flavor::Full).chains.size() == 11);
    CHECK(chain_poset(z6, Flavor::Reduced).chains.size() == 8);
    FinAbGroup e = parse_group("e");
    CHECK(chain_poset(e, Flavor::Full).chains.size() == 1);
    CHECK(chain_poset(e, Flavor::Reduced).chains.size() == 1);
    // chains ascend strictly
    for (const auto& c : chain_poset(v4, Flavor::Full).chains)
        for (size_t i = 0; i + 1 < c.size(); ++i) CHECK(c[i] < c[i + 1]);
}

TEST_CASE("flavor names parse and print") {
    CHECK(flavor_from_name("P") == Flavor::Full);
    CHECK(flavor_from_name("P'") == Flavor::Pairs);
    CHECK(flavor_from_name("P''") == Flavor::Reduced);
    CHECK(flavor_from_name("reduced") == Flavor::Reduced);
    CHECK(std::string(flavor_name(Flavor::Pairs)) == "P'");
    CHECK_THROWS_AS(flavor_from_name("Q"), std::invalid_argument);
}
