#ifndef MODEQ_CMPOINTS_HPP
#define MODEQ_CMPOINTS_HPP

#include <set>
#include <vector>

#include "modeq/puiseux.hpp"  // IntMat2

namespace modeq {

// Root tau = (-b + sqrt(b^2 - 4ac)) / (2a) in the upper half plane.
// gcd normalization is deliberately not forced.
struct QuadraticIrrational {
    Int a, b, c;

    Int disc() const { return b * b - 4 * a * c; }
    void validate() const;
    std::string to_string() const;  // "a,b,c"
    static QuadraticIrrational parse(const std::string& s);
};

// Exact test of (p q; r s) . tau == tau under the fractional-linear action.
bool fixes_tau(const IntMat2& m, const QuadraticIrrational& tau);

// Trace and norm of an algebraic integer tau0 (leading coefficient 1).
struct TraceNorm {
    Int tr, nm;
};
TraceNorm algebraic_integer_data(const QuadraticIrrational& tau0);

// Positive definite primitive form Q[A, B, C] = A x^2 + B x y + C y^2.
struct QForm {
    Int A, B, C;
    Int operator()(const Int& x, const Int& y) const { return A * x * x + B * x * y + C * y * y; }
};

// Q[Nm(tau0) N^2, Tr(tau0) N, 1].
QForm build_form(const QuadraticIrrational& tau0, long level);

struct RepresentedPrime {
    Int l, c, d;  // Q(c, d) = l
};

// Deterministic scan: shells s = max(|c|, |d|) = 1, 2, ...; within a shell
// c = 0..s ascending, then d = s..-s descending; first prime not dividing the
// level and not in the skip set wins.
RepresentedPrime find_represented_prime(const QForm& q, long level, const std::set<Int>& skip,
                                        long search_bound);

// rho_l = (c N Tr + d, -c N Nm; c N, d); verified to fix tau0 with
// determinant Q(c, d).
IntMat2 build_rho(const QuadraticIrrational& tau0, long level, const Int& c, const Int& d);

struct PrimitivePrime {
    Int p;
    IntMat2 rho, rho_sq;
    struct Rejected {
        Int l;
        IntMat2 rho_sq;
    };
    std::vector<Rejected> rejected;  // candidates whose square was imprimitive
};

// Smallest prime represented by the form whose rho^2 is primitive (skipping
// the given primes); the congruence filter is only a heuristic and is
// disabled when Tr(tau0) = 0.
PrimitivePrime find_primitive_square_prime(const QuadraticIrrational& tau0, long level,
                                           long search_bound,
                                           const std::set<Int>& skip = {});

struct Decomposition {
    IntMat2 gamma;  // in Gamma_0(N)
    IntMat2 omega;  // in Omega(det rho)
};

// rho = gamma * omega by column Hermite reduction; requires rho primitive
// with positive determinant, gcd(rho_11, N) = 1 and N | rho_21.
Decomposition decompose(const IntMat2& rho, long level);

struct ScaledPoint {
    QuadraticIrrational tau0;  // algebraic integer a' * tau
    IntMat2 omega0;            // (1, 0; 0, a'), in Omega(a')
    Int a_scaled;              // a'; 1 when no scaling was needed
    bool direct;               // input already had a = 1
};

// Rescales a tau^2 + b tau + c = 0 so the new leading coefficient is the
// smallest perfect square coprime to N with at least two distinct prime
// divisors; tau = omega0 tau0.
ScaledPoint scale_to_integer_point(const QuadraticIrrational& tau, long level);

}  // namespace modeq

#endif  // MODEQ_CMPOINTS_HPP
