#pragma once

#include <complex>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "aniso/polynomial.hpp"
#include "aniso/rational.hpp"

namespace aniso {

// Multivariate power series in d variables with exact complex rational
// coefficients, truncated at total degree max_degree.
class PowerSeries {
public:
    PowerSeries(int dim, int max_degree);

    static PowerSeries constant(int dim, int max_degree, const ComplexRational& c);
    static PowerSeries variable(int dim, int max_degree, int axis);

    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    const std::map<MultiIndex, ComplexRational>& terms() const { return terms_; }

    ComplexRational coefficient(const MultiIndex& beta) const;
    ComplexRational constant_term() const { return coefficient(MultiIndex(dim_, 0)); }
    // Sets the coefficient; ignored beyond max_degree, zero erases.
    void set(const MultiIndex& beta, const ComplexRational& c);
    void add(const MultiIndex& beta, const ComplexRational& c);

    PowerSeries truncated(int degree) const;
    std::complex<double> eval(const Eigen::VectorXd& xi) const;

    PowerSeries& operator+=(const PowerSeries& o);
    PowerSeries& operator-=(const PowerSeries& o);
    PowerSeries& operator*=(const ComplexRational& c);
    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator*(PowerSeries a, const ComplexRational& c) { return a *= c; }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    friend bool operator==(const PowerSeries& a, const PowerSeries& b)
    {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    std::string str() const;

private:
    int dim_;
    int max_degree_;
    std::map<MultiIndex, ComplexRational> terms_;
};

// log(s) for s(0) = 1 via log(1+u) = sum (-1)^{j+1} u^j / j.
PowerSeries log_series(const PowerSeries& s);
// exp(u) for u(0) = 0 via sum u^j / j!.
PowerSeries exp_series(const PowerSeries& u);

}  // namespace aniso
