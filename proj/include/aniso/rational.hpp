#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace aniso {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

// Parses "p", "p/q" or a finite decimal such as "-0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
    ComplexRational(long r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    ComplexRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }
    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    ComplexRational& operator+=(const ComplexRational& o);
    ComplexRational& operator-=(const ComplexRational& o);
    ComplexRational& operator*=(const ComplexRational& o);
    ComplexRational& operator/=(const ComplexRational& o);

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
    friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

inline const ComplexRational imag_unit{Rational(0), Rational(1)};

// i^k for integer k >= 0
ComplexRational i_power(int k);

std::string to_string(const ComplexRational& z);

}  // namespace aniso
