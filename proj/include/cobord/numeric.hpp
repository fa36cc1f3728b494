#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace cobord {

using Int = mpz_class;
using Rat = mpq_class;
using Exp = std::vector<int32_t>;  // exponent tuple

inline std::string to_string(const Int& z) { return z.get_str(); }
inline std::string to_string(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    return c.get_str();
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// floor division quotient (sign-correct for lattice reduction)
inline Int fdiv_q(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
    return r;
}

}  // namespace cobord
