#include "modeq/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace modeq {

Real::Real(long prec) : prec_(prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) : prec_(o.prec_) {
    mpfr_init2(v_, o.prec_);
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(v_, o.prec_);
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this == &o) return *this;
    mpfr_set_prec(v_, o.prec_);
    prec_ = o.prec_;
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    std::swap(prec_, o.prec_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from_long(long v, long prec) {
    Real r(prec);
    mpfr_set_si(r.v_, v, MPFR_RNDN);
    return r;
}

Real Real::from_int(const Int& v, long prec) {
    Real r(prec);
    mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real Real::from_rat(const Rat& v, long prec) {
    Real r(prec);
    mpfr_set_q(r.v_, v.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::pi(long prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::operator-() const {
    Real r(prec_);
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

Real operator+(const Real& a, const Real& b) {
    Real r(std::max(a.prec_, b.prec_));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(std::max(a.prec_, b.prec_));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(std::max(a.prec_, b.prec_));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    Real r(std::max(a.prec_, b.prec_));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real Real::abs() const {
    Real r(prec_);
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::sqrt() const {
    Real r(prec_);
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::exp() const {
    Real r(prec_);
    mpfr_exp(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::sin() const {
    Real r(prec_);
    mpfr_sin(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::cos() const {
    Real r(prec_);
    mpfr_cos(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::ldexp(long e) const {
    Real r(prec_);
    mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN);
    return r;
}

double Real::log2_abs() const {
    if (mpfr_zero_p(v_)) return -1e300;
    long exp;
    double m = mpfr_get_d_2exp(&exp, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(exp);
}

Int Real::round_to_int() const {
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_round(t, v_);
    Int out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return out;
}

std::string Real::to_decimal(size_t digits) const {
    if (!is_finite()) return "nan";
    char* s = nullptr;
    int neg = mpfr_sgn(v_) < 0;
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    std::string digits_only = neg ? mant.substr(1) : mant;
    std::ostringstream os;
    if (neg) os << "-";
    os << digits_only.substr(0, 1);
    if (digits_only.size() > 1) os << "." << digits_only.substr(1);
    os << "e" << (e - 1);
    return os.str();
}

std::string Real::sci3() const { return to_decimal(3); }

long Complex::effective_prec() const {
    long bits = 0;
    unsigned long e = err_ulps_;
    while (e) {
        ++bits;
        e >>= 1;
    }
    return prec() - bits;
}

Complex operator+(const Complex& a, const Complex& b) {
    return Complex(a.re_ + b.re_, a.im_ + b.im_,
                   std::max(a.err_ulps_, b.err_ulps_) + 1);
}

Complex operator-(const Complex& a, const Complex& b) {
    return Complex(a.re_ - b.re_, a.im_ - b.im_,
                   std::max(a.err_ulps_, b.err_ulps_) + 1);
}

Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_,
                   a.err_ulps_ + b.err_ulps_ + 2);
}

Complex Complex::mul_real(const Real& r) const {
    return Complex(re_ * r, im_ * r, err_ulps_ + 1);
}

Complex Complex::div_real(const Real& r) const {
    return Complex(re_ / r, im_ / r, err_ulps_ + 1);
}

Complex Complex::div(const Complex& b) const {
    Real n = b.re_ * b.re_ + b.im_ * b.im_;
    Real rr = (re_ * b.re_ + im_ * b.im_) / n;
    Real ri = (im_ * b.re_ - re_ * b.im_) / n;
    return Complex(rr, ri, err_ulps_ + b.err_ulps_ + 4);
}

Real Complex::abs() const {
    Real r(re_.prec());
    mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
    return r;
}

std::string Complex::to_string(size_t digits) const {
    std::string r = re_.to_decimal(digits);
    if (im_.is_zero()) return r;
    std::string i = im_.to_decimal(digits);
    if (!i.empty() && i[0] == '-') return r + " - " + i.substr(1) + "i";
    return r + " + " + i + "i";
}

}  // namespace modeq
