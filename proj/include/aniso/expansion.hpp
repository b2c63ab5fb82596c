#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aniso/lattice.hpp"
#include "aniso/polynomial.hpp"
#include "aniso/power_series.hpp"

namespace aniso {

inline constexpr int default_truncation_degree = 12;

// Series of phi_hat(xi0 + xi) through total degree max_degree. Exact when
// phi is exact and every entry of xi0 is 0 or pi (within 1e-12); otherwise
// coefficients are summed in 128-bit floating point and stored as the
// exact binary value, with magnitudes below 1e-24 dropped.
PowerSeries taylor_at(const LatticeFunction& phi, const Eigen::VectorXd& xi0, int max_degree = default_truncation_degree);
bool taylor_is_exact(const LatticeFunction& phi, const Eigen::VectorXd& xi0);

// log(phi_hat(xi0 + xi) / phi_hat(xi0))
PowerSeries gamma_series(const LatticeFunction& phi, const Eigen::VectorXd& xi0,
                         int max_degree = default_truncation_degree);

enum class PointType { positive_homogeneous, imaginary_homogeneous, unclassified };
std::string to_string(PointType t);

struct WeightChoice {
    std::vector<int> m;
    Rational k;
    Rational mu;  // sum 1 / (2 m_j)
};

struct PointClassification {
    Eigen::VectorXd xi0;
    PointType type = PointType::unclassified;
    std::vector<Rational> drift;
    std::vector<int> m;
    Rational k;
    Rational mu;
    Polynomial Q;
    Polynomial R;
    Polynomial Q_tail;
    Polynomial R_tail;
    int truncation_degree = 0;
    double min_abs_Q = 0.0;  // over the weighted sphere grid
    double min_R = 0.0;
    std::string diagnostics;
};

// Splits gamma into drift, Q, Q_tail, R, R_tail for weights m and ratio k.
// Throws when the real linear part is nonzero or a term falls below its
// stratum (imaginary nonlinear weight < 1, real weight < k).
PointClassification decompose(const PowerSeries& gamma, const std::vector<int>& m, const Rational& k);

// Candidate (m, k) with m in {1..search_bound}^d, ordered by mu descending.
// Candidates whose strata need terms beyond the series degree are skipped.
// Throws when none is admissible.
std::vector<WeightChoice> infer_weights(const PowerSeries& gamma, int search_bound = 6);

// Points xi_j = w_j / N(w)^{1/(2 m_j)}, N(w) = sum |w_j|^{2 m_j}, on {sum |xi_j|^{2 m_j} = 1}.
std::vector<Eigen::VectorXd> weighted_sphere_grid(const std::vector<int>& m, std::size_t count = 10000);

PointClassification classify(const PowerSeries& gamma, const std::vector<int>& m, const Rational& k,
                             const std::vector<Eigen::VectorXd>& sphere_grid);

// taylor_at + log + infer_weights + classify; the first candidate that
// classifies wins, else the result is unclassified with diagnostics.
PointClassification classify_point(const LatticeFunction& phi, const Eigen::VectorXd& xi0, int search_bound = 6,
                                   int max_degree = default_truncation_degree);

Rational mu_phi(const std::vector<PointClassification>& points);

// i alpha.xi - i (Q + Q_tail) - (R + R_tail) as a series
PowerSeries reassemble(const PointClassification& c, int dim, int max_degree);

// xi0, type, drift, m, k, mu, then "table" blocks of (multi-index, numerator, denominator) rows.
void write_classification(std::ostream& os, const PointClassification& c);

}  // namespace aniso
