#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aniso/rational.hpp"

namespace aniso {

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& beta);
// |beta : n| = sum beta_j / n_j
Rational weighted_degree(const MultiIndex& beta, const std::vector<int>& n);

// Sparse real polynomial in d variables with exact rational coefficients.
class Polynomial {
public:
    explicit Polynomial(int dim = 1);
    Polynomial(int dim, const std::map<MultiIndex, Rational>& terms);

    int dim() const { return dim_; }
    const std::map<MultiIndex, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    Rational coefficient(const MultiIndex& beta) const;

    double eval(const Eigen::VectorXd& x) const;
    Rational eval_exact(const std::vector<Rational>& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    std::vector<Rational> gradient_exact(const std::vector<Rational>& x) const;
    Polynomial partial(int axis) const;

    // true iff every term has |beta : n| equal to `degree`
    bool weighted_homogeneous(const std::vector<int>& n, const Rational& degree) const;

    std::string str() const;

private:
    int dim_;
    std::map<MultiIndex, Rational> terms_;
    std::vector<std::pair<MultiIndex, double>> fast_;
};

}  // namespace aniso
