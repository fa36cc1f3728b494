#pragma once

#include "numeric.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cobord {

enum class BaseKind { Additive, Multiplicative, UniversalRational, UniversalIntegral, ModPReduced };

const char* base_kind_name(BaseKind k);
BaseKind base_kind_from_name(const std::string& s);  // throws on unknown

// Graded coefficient ring presented by polynomial generators in even positive
// degrees; monomials above max_degree are outside the window and get dropped
// (with a truncation flag) by arithmetic.
struct GradedBase {
    BaseKind kind;
    int max_degree;                  // even, >= 0
    long modulus = 0;                // ModPReduced only
    std::vector<std::string> names;
    std::vector<int> degrees;

    size_t ngens() const { return names.size(); }
    int degree_of(const Exp& e) const;
};

std::shared_ptr<const GradedBase> make_base(BaseKind kind, int max_degree, long p = 0);

// polynomial in the base generators
struct BasePoly {
    std::map<Exp, Rat> t;

    bool is_zero() const { return t.empty(); }
    bool operator==(const BasePoly& o) const { return t == o.t; }
};

BasePoly bp_const(const GradedBase& b, const Rat& c);
BasePoly bp_gen(const GradedBase& b, size_t i);
// drop monomials beyond the degree window, reduce mod p, erase zeros
void bp_norm(const GradedBase& b, BasePoly& p, bool* truncated = nullptr);
BasePoly bp_add(const GradedBase& b, const BasePoly& x, const BasePoly& y);
BasePoly bp_sub(const GradedBase& b, const BasePoly& x, const BasePoly& y);
BasePoly bp_neg(const GradedBase& b, const BasePoly& x);
BasePoly bp_mul(const GradedBase& b, const BasePoly& x, const BasePoly& y, bool* truncated = nullptr);
BasePoly bp_scale(const GradedBase& b, const Rat& c, const BasePoly& x);
// degree if homogeneous (0 for the zero polynomial); throws otherwise
int bp_degree(const GradedBase& b, const BasePoly& x);
bool bp_is_integral(const BasePoly& x);

std::string bp_to_string(const GradedBase& b, const BasePoly& x);
std::string monomial_to_string(const std::vector<std::string>& names, const Exp& e);

}  // namespace cobord
