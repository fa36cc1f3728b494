#pragma once

#include "base.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cobord {

// Laurent: invertible, exponents boxed into [-E, E].
// SeriesOnly: completed variable, nonnegative exponents, block-bounded.
// LaurentSeries: completed and invertible; negative side boxed by E, positive
//                side counted into its block bound.
// Polynomial: nonnegative exponents, counted into the shared poly_bound.
enum class VarMode { Polynomial, Laurent, LaurentSeries, SeriesOnly };

struct VarInfo {
    std::string name;
    int degree;      // even (possibly negative)
    VarMode mode;
    int block = -1;  // series block id for (Laurent)Series vars
};

// The window of representable monomials: which variables exist, how far each
// direction of each exponent may go, and the base-degree cutoff (held by base).
struct Roster {
    std::shared_ptr<const GradedBase> base;
    std::vector<VarInfo> vars;
    std::map<int, int> block_bound;  // block id -> bound on total positive exponent
    int laurent_bound = 0;           // E
    int poly_bound = 0;              // P

    size_t nvars() const { return vars.size(); }
    int find(const std::string& name) const;
    bool in_window(const Exp& e) const;
    int var_degree(const Exp& e) const;  // sum e[v] * deg(v)
};

std::shared_ptr<const Roster> roster_with_temp_var(const std::shared_ptr<const Roster>& ros,
                                                   const std::string& name, int degree,
                                                   int block_bound);

// graded ring element supported on the roster window
struct Series {
    std::shared_ptr<const Roster> ros;
    std::map<Exp, BasePoly> t;
    bool truncated = false;
};

Series s_zero(std::shared_ptr<const Roster> ros);
Series s_const(std::shared_ptr<const Roster> ros, const Rat& c);
Series s_base(std::shared_ptr<const Roster> ros, const BasePoly& p);
Series s_var(std::shared_ptr<const Roster> ros, size_t v, int power = 1);
Series s_monomial(std::shared_ptr<const Roster> ros, const Exp& e, const BasePoly& p);

bool s_is_zero(const Series& a);
void s_norm(Series& a);
Series s_add(const Series& a, const Series& b);
Series s_sub(const Series& a, const Series& b);
Series s_neg(const Series& a);
Series s_mul(const Series& a, const Series& b);
Series s_scale(const Rat& c, const Series& a);
Series s_pow(const Series& a, int k);  // k >= 0
bool s_equal(const Series& a, const Series& b);

// degree if homogeneous (0 for zero); throws otherwise
int s_degree(const Series& a);
bool s_is_homogeneous(const Series& a, int degree);

// embed into a roster that extends a.ros by trailing variables
Series s_embed(const Series& a, std::shared_ptr<const Roster> wider);
// drop terms outside a narrower window over the same variables (flags drops)
Series s_restrict(const Series& a, std::shared_ptr<const Roster> narrow);
// coefficient of temp^power where temp is the last variable; result lives on narrow
Series s_coeff_of_last(const Series& a, int power, std::shared_ptr<const Roster> narrow);

// Multiplicative inverse within the window.  Splits off a term c*m with m a
// monomial in invertible variables and c an invertible coefficient such that
// a / (c*m) - 1 only has monomials of positive completed weight (exponent on
// some series, Laurent-series, or polynomial variable), then sums the
// geometric series until it leaves the window.  Throws if no such term exists.
Series s_reciprocal(const Series& a);

std::string s_to_string(const Series& a);

}  // namespace cobord
