#ifndef MODEQ_NUMBERS_HPP
#define MODEQ_NUMBERS_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace modeq {

using Int = mpz_class;
using Rat = mpq_class;

// A search or truncation budget ran out before the operation could finish.
// CLI maps this to exit code 3.
class bound_exhausted : public std::runtime_error {
public:
    explicit bound_exhausted(const std::string& what) : std::runtime_error(what) {}
};

// A series did not carry enough known terms for the requested computation.
class truncation_error : public bound_exhausted {
public:
    explicit truncation_error(const std::string& what) : bound_exhausted(what) {}
};

// A postcondition that is a theorem failed; indicates an arithmetic bug.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

// A formal q-series failed a consistency check that holds exactly for
// replicable series.
class replicability_error : public std::runtime_error {
public:
    explicit replicability_error(const std::string& what) : std::runtime_error(what) {}
};

inline Int int_gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd_long(a, b) * b;
}

// Probabilistic primality with enough rounds to be deterministic far past
// anything a desk-scale search bound can reach.
inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Floor of a/b for exact integers.
inline Int int_fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace modeq

#endif  // MODEQ_NUMBERS_HPP
