#include "aniso/rational.hpp"

#include <stdexcept>

namespace aniso {

namespace {

// decimal digits only, so that BigInt never sees an octal or hex prefix
BigInt parse_integer(std::string s)
{
    const bool negative = !s.empty() && s[0] == '-';
    if (negative)
        s = s.substr(1);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad integer");
    std::size_t first = s.find_first_not_of('0');
    BigInt v(first == std::string::npos ? std::string("0") : s.substr(first));
    return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);
    if (s.empty())
        throw std::invalid_argument("empty rational");
    if (s[0] == '+')
        s = s.substr(1);
    auto dot = s.find('.');
    try {
        if (dot == std::string::npos) {
            auto slash = s.find('/');
            if (slash == std::string::npos)
                return Rational(parse_integer(s));
            BigInt den = parse_integer(s.substr(slash + 1));
            if (den == 0)
                throw std::invalid_argument("zero denominator");
            return Rational(parse_integer(s.substr(0, slash)), den);
        }
        if (s.find_first_of("eE/") != std::string::npos)
            throw std::invalid_argument("unsupported decimal form");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        if (digits.empty() || digits == "-")
            throw std::invalid_argument("bad decimal");
        BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac));
        return Rational(parse_integer(digits), den);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse rational: " + std::string(text));
    }
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

ComplexRational& ComplexRational::operator+=(const ComplexRational& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o)
{
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o)
{
    Rational den = o.norm2();
    if (den == 0)
        throw std::domain_error("complex rational division by zero");
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

ComplexRational i_power(int k)
{
    switch (((k % 4) + 4) % 4) {
    case 0: return {Rational(1), Rational(0)};
    case 1: return {Rational(0), Rational(1)};
    case 2: return {Rational(-1), Rational(0)};
    default: return {Rational(0), Rational(-1)};
    }
}

std::string to_string(const ComplexRational& z)
{
    return to_string(z.re) + (z.im < 0 ? " - " : " + ") + to_string(abs(z.im)) + "i";
}

}  // namespace aniso
