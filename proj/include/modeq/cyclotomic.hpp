#ifndef MODEQ_CYCLOTOMIC_HPP
#define MODEQ_CYCLOTOMIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "modeq/numbers.hpp"

namespace modeq {

// Euler phi.
unsigned long euler_phi(unsigned long n);

// The n-th cyclotomic polynomial Phi_n, ascending integer coefficients,
// monic of degree phi(n).
const std::vector<Int>& cyclotomic_polynomial(unsigned long n);

// Phi_n(1): p if n = p^e is a prime power, 1 otherwise.  Evaluated exactly.
Int cyclotomic_at_one(unsigned long n);

// The Galois automorphism zeta_M -> zeta_M^exponent of Q(zeta_M)/Q.
struct GaloisTwist {
    unsigned long order;
    long exponent;  // taken mod order; must be coprime to order
};

// Composition multiplies exponents modulo the order.
GaloisTwist compose(const GaloisTwist& s, const GaloisTwist& t);

// An element of Q(zeta_M) in the power basis 1, zeta, ..., zeta^{phi(M)-1}
// reduced modulo Phi_M.  Stored as integer coordinates over one positive
// denominator with content coprime to it, so products stay in Z until the
// final normalization.
class CycNum {
public:
    CycNum();  // rational zero, order 1
    explicit CycNum(const Rat& value, unsigned long order = 1);
    explicit CycNum(long value, unsigned long order = 1);
    CycNum(unsigned long order, std::vector<Rat> coords);

    static CycNum zero(unsigned long order);
    static CycNum one(unsigned long order);
    // zeta_order^k
    static CycNum root_of_unity(unsigned long order, long k);

    unsigned long order() const { return order_; }
    unsigned long degree() const { return static_cast<unsigned long>(num_.size()); }
    Rat coord(unsigned long i) const;
    std::vector<Rat> coords() const;
    // Raw numerator of coordinate i; exact only together with is_integral().
    mpz_srcptr coord_num(unsigned long i) const { return num_[i].get_mpz_t(); }

    bool is_zero() const;
    bool is_rational() const;
    // All coordinates in Z (element of Z[zeta_M]).
    bool is_integral() const { return den_ == 1; }
    Rat rational_value() const;  // requires is_rational()

    CycNum operator-() const;
    CycNum& operator+=(const CycNum& o);
    CycNum& operator-=(const CycNum& o);
    CycNum& operator*=(const CycNum& o);
    friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
    friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
    friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
    friend bool operator==(const CycNum& a, const CycNum& b);
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    CycNum& mul_rat(const Rat& r);
    CycNum& mul_int(const Int& k);
    // Multiply by zeta_order^k in place (no denominator change).
    CycNum& mul_root(long k);

    // Multiplicative inverse; throws std::domain_error on zero.
    CycNum inverse() const;

    // zeta -> zeta^t for gcd(t, order) = 1.
    CycNum galois(long t) const;
    CycNum galois(const GaloisTwist& t) const;

    // Image in Q(zeta_target) under zeta_M -> zeta_target^{target/M};
    // requires order | target.
    CycNum embed(unsigned long target) const;

    // The order-suborder representative if this element lies in
    // Q(zeta_suborder); std::nullopt otherwise.  Requires suborder | order.
    std::optional<CycNum> in_subfield(unsigned long suborder) const;

    // Field norm N_{Q(zeta_M)/Q} as the determinant of the multiplication map.
    Rat norm() const;

    // Coordinate strings "p/q" in canonical form, length phi(order).
    std::vector<std::string> coord_strings() const;
    std::string to_string() const;  // human-readable, zeta symbol zN

private:
    void normalize();
    void check_same_order(const CycNum& o, const char* op) const;

    unsigned long order_;
    std::vector<Int> num_;
    Int den_;
};

// Norm-based unit test in Z[zeta_M]; input must have integral coordinates.
bool is_unit(const CycNum& x);

// Parse one canonical coordinate string "p/q" (or "p").
Rat parse_rat(const std::string& s);

}  // namespace modeq

#endif  // MODEQ_CYCLOTOMIC_HPP
