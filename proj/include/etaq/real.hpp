// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace etaq {

using Integer = mpz_class;
using Rational = mpq_class;
using Precision = mpfr_prec_t;

// Floating-point value with an explicit mantissa width. All arithmetic
// rounds to nearest-even; binary results take the wider operand's width.
class Real {
public:
    explicit Real(Precision prec = 64);
    Real(long v, Precision prec);
    Real(int v, Precision prec) : Real(static_cast<long>(v), prec) {}
    Real(double v, Precision prec);
    Real(const Integer& v, Precision prec);
    Real(const Rational& v, Precision prec);
    Real(const Real& other);
    Real(const Real& other, Precision prec);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    Precision precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long o);
    Real& operator/=(long o);

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    // Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
    long exponent() const;
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    Integer round() const;
    Integer floor() const;
    std::string to_string(int digits) const;

private:
    mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real cosh(const Real& x);
Real sinh(const Real& x);
Real cos(const Real& x);
Real sin(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long e);
void sin_cos(const Real& x, Real& s, Real& c);
Real const_pi(Precision prec);
// 2^e exactly.
Real exp2i(long e, Precision prec);

struct Complex {
    Real re;
    Real im;

    explicit Complex(Precision prec = 64) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(long r, Precision prec) : re(r, prec), im(0L, prec) {}

    Precision precision() const { return re.precision(); }
    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator*=(const Real& o);
    Complex& operator*=(long o);
    // Multiply by i^e.
    Complex& mul_i_pow(long e);
    Complex conj() const;
    Real abs() const;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Complex& a, long b);
// exp(2 pi i num / den).
Complex root_of_unity(long num, long den, Precision prec);

}  // namespace etaq
