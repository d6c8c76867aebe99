#ifndef MODEQ_PUISEUX_HPP
#define MODEQ_PUISEUX_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "modeq/cyclotomic.hpp"
#include "modeq/numbers.hpp"

namespace modeq {

// Truncation bound: exponents >= bound are unknown (not zero).  Exact
// polynomial-like series carry an infinite bound.
struct Trunc {
    bool finite = false;
    Rat bound;  // meaningful when finite

    static Trunc inf() { return Trunc{}; }
    static Trunc at(const Rat& b) { return Trunc{true, b}; }
    static Trunc at(long b) { return Trunc{true, Rat(b)}; }

    friend Trunc min(const Trunc& a, const Trunc& b) {
        if (!a.finite) return b;
        if (!b.finite) return a;
        return a.bound <= b.bound ? a : b;
    }
    friend Trunc operator+(const Trunc& t, const Rat& r) {
        if (!t.finite) return t;
        return Trunc::at(t.bound + r);
    }
    // exponent < bound?
    bool covers(const Rat& e) const { return !finite || e < bound; }
    bool operator==(const Trunc& o) const {
        return finite == o.finite && (!finite || bound == o.bound);
    }
    std::string to_string() const;
};

// 2x2 integer matrix; also the carrier for Omega(n) representatives and the
// rho/gamma matrices of the CM-point machinery.
struct IntMat2 {
    Int a, b, c, d;

    static IntMat2 identity() { return {Int(1), Int(0), Int(0), Int(1)}; }
    Int det() const { return a * d - b * c; }
    Int content() const { return int_gcd(int_gcd(abs(a), abs(b)), int_gcd(abs(c), abs(d))); }
    bool is_primitive() const { return content() == 1; }
    // upper-triangular (a, b; 0, d) with a,d >= 1 and 0 <= b < d
    bool is_omega_shape() const {
        return c == 0 && a >= 1 && d >= 1 && b >= 0 && b < d;
    }
    friend IntMat2 operator*(const IntMat2& x, const IntMat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    bool operator==(const IntMat2& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    std::string to_string() const;  // "a,b,c,d"
    static IntMat2 parse(const std::string& s);
};

// Truncated series in q^{1/e} with CycNum coefficients.  Terms are keyed by
// the exponent numerator k, meaning q^{k/e}; zero coefficients are never
// stored and every stored exponent is below the truncation bound.
class PuiseuxSeries {
public:
    PuiseuxSeries() : coeff_order_(1), ram_(1), trunc_(Trunc::inf()) {}
    static PuiseuxSeries zero(unsigned long coeff_order, Trunc t);
    // coeff * q^{num/den}
    static PuiseuxSeries monomial(const CycNum& coeff, long num, long den = 1,
                                  Trunc t = Trunc::inf());

    unsigned long coeff_order() const { return coeff_order_; }
    long ramification() const { return ram_; }
    const Trunc& trunc() const { return trunc_; }
    const std::map<long, CycNum>& terms() const { return terms_; }
    bool known_zero() const { return terms_.empty(); }

    // Lowest stored exponent, absent if no terms are stored.
    std::optional<Rat> order() const;

    // Coefficient at exponent e; zero when absent and e < trunc, otherwise a
    // truncation_error.
    CycNum coeff_at(const Rat& e) const;
    CycNum coeff_at(long e) const { return coeff_at(Rat(e)); }

    void set_term(const Rat& e, const CycNum& c);

    PuiseuxSeries& operator+=(const PuiseuxSeries& o);
    PuiseuxSeries& operator-=(const PuiseuxSeries& o);
    friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries& b) { return a += b; }
    friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries& b) { return a -= b; }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
    PuiseuxSeries operator-() const;

    // Equality of canonical forms (same coefficient order required on both
    // sides of every mixed-operand operation in this module).
    bool operator==(const PuiseuxSeries& o) const;

    std::string to_string(const std::string& var = "q") const;

private:
    friend PuiseuxSeries scale(const CycNum& c, PuiseuxSeries f);
    friend PuiseuxSeries truncate_at(PuiseuxSeries f, const Rat& bound);
    friend PuiseuxSeries series_embed(const PuiseuxSeries& f, unsigned long target);
    friend PuiseuxSeries substitute_omega(const PuiseuxSeries& f, const IntMat2& w);
    friend PuiseuxSeries galois_series(const PuiseuxSeries& f, long n);

    void canonicalize();
    void align(const PuiseuxSeries& o, long& new_ram, long& fa, long& fb) const;

    unsigned long coeff_order_;
    long ram_;
    std::map<long, CycNum> terms_;
    Trunc trunc_;
};

PuiseuxSeries scale(const CycNum& c, PuiseuxSeries f);
PuiseuxSeries ps_pow(const PuiseuxSeries& f, unsigned long k);
// Lower the truncation bound to min(current, bound), dropping covered terms.
PuiseuxSeries truncate_at(PuiseuxSeries f, const Rat& bound);
PuiseuxSeries series_embed(const PuiseuxSeries& f, unsigned long target);

// f(omega z) for omega = (a, b; 0, d) of Omega shape: each term
// q^{k/e} -> zeta_{de}^{kb} q^{ka/(de)}; coefficients embedded into
// lcm(coeff order, de).
PuiseuxSeries substitute_omega(const PuiseuxSeries& f, const IntMat2& w);

// Coefficient-wise Galois twist *n.
PuiseuxSeries galois_series(const PuiseuxSeries& f, long n);

// q^{-1} + 0 + sum_{m>=1} a_m q^m with integral exponents.
bool is_normalized_hauptmodul(const PuiseuxSeries& f);

// Equality of all coefficients at exponents < upto (both series must cover).
bool series_agree(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rat& upto);

// --- file format -----------------------------------------------------------
// modeq-series 1
// cyclotomic_order M / ramification e / truncation p/q|inf / terms n
// term <exponent numerator> <phi(M) coordinate strings>
// end
void write_series(std::ostream& os, const PuiseuxSeries& f);
PuiseuxSeries read_series(std::istream& is);
void save_series(const std::string& path, const PuiseuxSeries& f);
PuiseuxSeries load_series(const std::string& path);

}  // namespace modeq

#endif  // MODEQ_PUISEUX_HPP
