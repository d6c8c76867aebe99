#ifndef MODEQ_MODPOLY_HPP
#define MODEQ_MODPOLY_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "modeq/puiseux.hpp"

namespace modeq {

// psi(n) = n prod_{p | n} (1 + 1/p), the size of Omega(n).
long psi(long n);

// Upper-triangular primitive matrices (a, b; 0, d), ad = n, 0 <= b < d,
// gcd(a, b, d) = 1, enumerated in lexicographic (a, b) order.
struct OmegaSet {
    long n = 0;
    std::vector<IntMat2> matrices;
};
OmegaSet enumerate_omega(long n);

// Polynomial in X and Y with CycNum coefficients; houses F_n(X, Y).
struct BivarPoly {
    long order_n = 0;   // the modular-equation order
    long level = 0;     // N
    unsigned long coeff_order = 1;
    std::map<std::pair<long, long>, CycNum> terms;  // (i, j) -> coeff of X^i Y^j

    long degree_x() const;
    long degree_y() const;
    CycNum coeff(long i, long j) const;
    void set(long i, long j, const CycNum& c);
    bool monic_in_y() const;
    std::string to_string() const;
};

// Expands prod_{omega in Omega(n)} (Y - h(omega z)) and reduces the symmetric
// coefficients to polynomials in h*n, returning F with
// F((h*n)(q), Y) = prod (Y - h(omega q)) up to the certified truncation.
//
// h must be a normalized Hauptmodul-shaped series with coefficients in
// Q(zeta_N) (coefficient order dividing N), gcd(n, N) = 1, and truncation at
// least n*psi(n) + n + 2.  verify_margin is the number of positive q-powers
// of the reduction remainder that must be certified zero.
BivarPoly build_modpoly(const PuiseuxSeries& h, long n, long level,
                        long verify_margin = 2);

struct ModeqCheck {
    bool ok = false;
    Rat verified_order;                  // vanishing certified for exponents < this
    std::optional<Rat> failed_exponent;  // first nonzero exponent when !ok
};

// Substitutes X = f*n (or X = f when twist is false) and Y = f(omega q) for
// every omega in Omega(n) and verifies all computable terms up to
// verify_bound vanish.
ModeqCheck check_modeq(const PuiseuxSeries& f, const BivarPoly& F, long n, long level,
                       bool twist, long verify_bound);

// F(X, Y) == (F *n)(Y, X).
bool check_symmetry(const BivarPoly& F, long n);

enum class LeadingClass { unit, prime_times_unit };

struct DiagonalResult {
    std::vector<CycNum> poly;  // F_n(h, h) as a polynomial in h, ascending
    LeadingClass classification;
    Int p;  // the prime when classification == prime_times_unit, else 1
};

// Diagonal restriction for square n: expands prod (h - h(omega q)), reduces
// against powers of h, verifies integrality over Z[zeta_N], checks the result
// against F(X, X), and classifies the leading coefficient.
DiagonalResult diagonal(const BivarPoly& F, const PuiseuxSeries& h, long n, long level,
                        long verify_margin = 2);

// A truncation budget that comfortably certifies the construction.
long modpoly_truncation(long n, long verify_margin = 2);
// ... and one sufficient for the diagonal restriction.
long diagonal_truncation(long n, long verify_margin = 2);
// ... and one sufficient for check_modeq at the given verify bound.
long modeq_check_truncation(long n, long verify_bound);

// --- file format -----------------------------------------------------------
// modeq-modpoly 1 / order n / level N / cyclotomic_order M / terms k
// term i j <coords> ... end   (sorted by (i, j))
void write_modpoly(std::ostream& os, const BivarPoly& F);
BivarPoly read_modpoly(std::istream& is);
void save_modpoly(const std::string& path, const BivarPoly& F);
BivarPoly load_modpoly(const std::string& path);

}  // namespace modeq

#endif  // MODEQ_MODPOLY_HPP
