// SPDX-License-Identifier: Apache-2.0
#include "etaq/real.hpp"

#include <algorithm>
#include <utility>

namespace etaq {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

Precision wider(const Real& a, const Real& b) {
    return std::max(a.precision(), b.precision());
}

}  // namespace

Real::Real(Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

Real::Real(long v, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, v, kRnd);
}

Real::Real(double v, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, v, kRnd);
}

Real::Real(const Integer& v, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, v.get_mpz_t(), kRnd);
}

Real::Real(const Rational& v, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, v.get_mpq_t(), kRnd);
}

Real::Real(const Real& other) {
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, kRnd);
}

Real::Real(const Real& other, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set(v_, other.v_, kRnd);
}

Real::Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(v_, other.precision());
        mpfr_set(v_, other.v_, kRnd);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real& Real::operator+=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
    mpfr_add(v_, v_, o.v_, kRnd);
    return *this;
}

Real& Real::operator-=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
    mpfr_sub(v_, v_, o.v_, kRnd);
    return *this;
}

Real& Real::operator*=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
    mpfr_mul(v_, v_, o.v_, kRnd);
    return *this;
}

Real& Real::operator/=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
    mpfr_div(v_, v_, o.v_, kRnd);
    return *this;
}

Real& Real::operator*=(long o) {
    mpfr_mul_si(v_, v_, o, kRnd);
    return *this;
}

Real& Real::operator/=(long o) {
    mpfr_div_si(v_, v_, o, kRnd);
    return *this;
}

long Real::exponent() const {
    if (mpfr_zero_p(v_)) return -(1L << 40);
    return mpfr_get_exp(v_);
}

Integer Real::round() const {
    Integer r;
    mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDN);
    return r;
}

Integer Real::floor() const {
    Integer r;
    mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDD);
    return r;
}

std::string Real::to_string(int digits) const {
    char* s = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&s, fmt.c_str(), v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Real operator+(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_add(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_sub(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_mul(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_div(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator-(const Real& a) {
    Real r(a.precision());
    mpfr_neg(r.get(), a.get(), kRnd);
    return r;
}

Real operator*(const Real& a, long b) {
    Real r(a);
    r *= b;
    return r;
}

Real operator/(const Real& a, long b) {
    Real r(a);
    r /= b;
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

#define ETAQ_UNARY(name, fn)                       \
    Real name(const Real& x) {                     \
        Real r(x.precision());                     \
        fn(r.get(), x.get(), kRnd);                \
        return r;                                  \
    }

ETAQ_UNARY(abs, mpfr_abs)
ETAQ_UNARY(sqrt, mpfr_sqrt)
ETAQ_UNARY(exp, mpfr_exp)
ETAQ_UNARY(log, mpfr_log)
ETAQ_UNARY(log2, mpfr_log2)
ETAQ_UNARY(cosh, mpfr_cosh)
ETAQ_UNARY(sinh, mpfr_sinh)
ETAQ_UNARY(cos, mpfr_cos)
ETAQ_UNARY(sin, mpfr_sin)

#undef ETAQ_UNARY

Real pow(const Real& x, const Real& y) {
    Real r(wider(x, y));
    mpfr_pow(r.get(), x.get(), y.get(), kRnd);
    return r;
}

Real pow(const Real& x, long e) {
    Real r(x.precision());
    mpfr_pow_si(r.get(), x.get(), e, kRnd);
    return r;
}

void sin_cos(const Real& x, Real& s, Real& c) {
    mpfr_set_prec(s.get(), x.precision());
    mpfr_set_prec(c.get(), x.precision());
    mpfr_sin_cos(s.get(), c.get(), x.get(), kRnd);
}

Real const_pi(Precision prec) {
    Real r(prec);
    mpfr_const_pi(r.get(), kRnd);
    return r;
}

Real exp2i(long e, Precision prec) {
    Real r(1L, prec);
    mpfr_mul_2si(r.get(), r.get(), e, kRnd);
    return r;
}

Complex& Complex::operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
}

Complex& Complex::operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Complex& Complex::operator*=(const Real& o) {
    re *= o;
    im *= o;
    return *this;
}

Complex& Complex::operator*=(long o) {
    re *= o;
    im *= o;
    return *this;
}

Complex& Complex::mul_i_pow(long e) {
    e = ((e % 4) + 4) % 4;
    if (e == 1) {
        std::swap(re, im);
        mpfr_neg(re.get(), re.get(), kRnd);
    } else if (e == 2) {
        mpfr_neg(re.get(), re.get(), kRnd);
        mpfr_neg(im.get(), im.get(), kRnd);
    } else if (e == 3) {
        std::swap(re, im);
        mpfr_neg(im.get(), im.get(), kRnd);
    }
    return *this;
}

Complex Complex::conj() const { return Complex(re, -im); }

Real Complex::abs() const {
    Real r(precision());
    mpfr_hypot(r.get(), re.get(), im.get(), kRnd);
    return r;
}

Complex operator+(const Complex& a, const Complex& b) {
    Complex r(a);
    r += b;
    return r;
}

Complex operator-(const Complex& a, const Complex& b) {
    Complex r(a);
    r -= b;
    return r;
}

Complex operator*(const Complex& a, const Complex& b) {
    Complex r(a);
    r *= b;
    return r;
}

Complex operator*(const Complex& a, const Real& b) {
    Complex r(a);
    r *= b;
    return r;
}

Complex operator*(const Complex& a, long b) {
    Complex r(a);
    r *= b;
    return r;
}

Complex root_of_unity(long num, long den, Precision prec) {
    num %= den;
    if (num < 0) num += den;
    // Exact points first; they keep Selberg scalars and small sums clean.
    if (num == 0) return Complex(1L, prec);
    if (2 * num == den) return Complex(-1L, prec);
    if (4 * num == den) return Complex(Real(0L, prec), Real(1L, prec));
    if (4 * num == 3 * den) return Complex(Real(0L, prec), Real(-1L, prec));
    // Fold to the nearer half turn so the angle stays in [-pi, pi].
    if (2 * num > den) num -= den;
    Precision wp = prec + 16;
    Real x = const_pi(wp);
    x *= 2 * num;
    x /= den;
    Real s(wp), c(wp);
    sin_cos(x, s, c);
    return Complex(Real(c, prec), Real(s, prec));
}

}  // namespace etaq
