#ifndef MODEQ_BIGFLOAT_HPP
#define MODEQ_BIGFLOAT_HPP

#include <mpfr.h>

#include <string>

#include "modeq/numbers.hpp"

namespace modeq {

// RAII wrapper over an mpfr_t at a fixed working precision.
class Real {
public:
    explicit Real(long prec = 64);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    static Real from_long(long v, long prec);
    static Real from_int(const Int& v, long prec);
    static Real from_rat(const Rat& v, long prec);
    static Real pi(long prec);

    long prec() const { return prec_; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }

    Real operator-() const;
    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    Real abs() const;
    Real sqrt() const;
    Real exp() const;
    Real sin() const;
    Real cos() const;
    // this * 2^e
    Real ldexp(long e) const;
    // log2(|this|), -inf for zero; coarse, for tolerance decisions
    double log2_abs() const;

    // Nearest integer.
    Int round_to_int() const;
    // Decimal string with the given number of significant digits.
    std::string to_decimal(size_t digits) const;
    // Scientific notation with 3 significant digits, e.g. "1.23e-31".
    std::string sci3() const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
    long prec_;
};

// Complex value carried as a pair of Reals; tracks a coarse ulp-style error
// counter so results can report an effective precision.
class Complex {
public:
    explicit Complex(long prec = 64) : re_(prec), im_(prec), err_ulps_(0) {}
    Complex(Real re, Real im, unsigned long err = 0)
        : re_(std::move(re)), im_(std::move(im)), err_ulps_(err) {}

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    long prec() const { return re_.prec(); }
    unsigned long err_ulps() const { return err_ulps_; }
    // Precision minus the error bound's bit length.
    long effective_prec() const;

    friend Complex operator+(const Complex& a, const Complex& b);
    friend Complex operator-(const Complex& a, const Complex& b);
    friend Complex operator*(const Complex& a, const Complex& b);
    Complex operator-() const { return Complex(-re_, -im_, err_ulps_); }
    Complex conj() const { return Complex(re_, -im_, err_ulps_); }
    Complex mul_real(const Real& r) const;
    Complex div_real(const Real& r) const;
    Complex div(const Complex& b) const;

    Real abs() const;
    std::string to_string(size_t digits = 20) const;

private:
    Real re_, im_;
    unsigned long err_ulps_;
};

}  // namespace modeq

#endif  // MODEQ_BIGFLOAT_HPP
