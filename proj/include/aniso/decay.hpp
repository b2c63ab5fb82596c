#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "aniso/expansion.hpp"
#include "aniso/lattice.hpp"

namespace aniso {

struct IntegerBox {
    LatticePoint lo;
    LatticePoint hi;
    static IntegerBox cube(int dim, int half) { return {LatticePoint(dim, -half), LatticePoint(dim, half)}; }
};

struct DecayRecord {
    int n = 0;
    double f_n = 0.0;  // max over K of |phi^(n)|
    PowerMethod method = PowerMethod::fft;
    long runtime_ms = 0;
};

// round(2^(j/per_octave)) from n_min to n_max, duplicates removed.
std::vector<int> log_schedule(int n_min, int n_max, int per_octave = 4);

// Hypotheses of the sup-norm decay estimate: Omega finite, every point
// classified, imaginary points with drift 0 and mu < 1.
struct HypothesisReport {
    bool pass = false;
    std::string reason;
    MaxModulusSet omega;
    std::vector<PointClassification> points;
    Rational mu;
};
HypothesisReport check_hypotheses(const LatticeFunction& phi, const OmegaOptions& opt = {});

// f(n) for the scheduled n. Throws std::domain_error when the hypotheses fail.
// The fft path uses one transform on a padded grid (windowed past the memory
// guard); the direct path convolves in double precision.
std::vector<DecayRecord> decay_curve(const LatticeFunction& phi, const IntegerBox& k, const std::vector<int>& schedule,
                                     PowerMethod method = PowerMethod::fft, const FftOptions& fft = {},
                                     bool check_gate = true);

struct SlopeFit {
    double slope = 0.0;
    double std_error = 0.0;
    std::size_t points = 0;
};
// OLS of log f on log n over the records with n >= sqrt(n_first * n_last)
// when window == 0, else over the last `window` records.
SlopeFit slope_fit(const std::vector<DecayRecord>& records, std::size_t window = 0);

struct BoundCheck {
    double c_hat = 0.0;       // max f(n) n^mu
    double early_max = 0.0;   // max over the first three quarters
    bool pass = false;        // c_hat <= 1.05 early_max
};
BoundCheck theorem_bound_check(const std::vector<DecayRecord>& records, double mu);

// CSV: n,f_n,f_n_times_n_mu,method,runtime_ms
void write_decay_csv(std::ostream& os, const std::vector<DecayRecord>& records, double mu, bool with_timing);
// gnuplot script plotting log2 f(n) and log2 n^-mu against log2 n
void write_decay_plot(std::ostream& os, const std::string& csv_name, double mu, const std::string& title);

// Tensor trapezoid nodes on T_phi = shift + (-pi, pi]^d, at least n*extent+1 per axis.
struct TorusGrid {
    std::vector<int> nodes;
    Eigen::VectorXd shift;
};

struct LocalizedDecomposition {
    std::vector<Complex> localized;  // one per point of Omega
    Complex complement = 0.0;
    Complex total = 0.0;
    Complex direct = 0.0;            // phi^(n)(x) by direct convolution
    double residual = 0.0;           // |total - direct|
    double radius = 0.0;
    double s = 0.0;                  // sup of |phi_hat| over complement nodes
    double complement_max = 0.0;     // max of |phi_hat|^n over complement nodes
};

// (2 pi)^-d int over the torus ball of radius r around xi0 of phi_hat^n e^{-i x.xi}.
Complex localized_integral(const LatticeFunction& phi, const Eigen::VectorXd& xi0, double radius, int n,
                           const LatticePoint& x, const std::vector<int>& quad_nodes = {});

// Splits the inversion integral into balls around Omega and the rest.
// radius <= 0 picks min(0.5, a third of the smallest pairwise distance).
LocalizedDecomposition localized_decomposition(const LatticeFunction& phi, const MaxModulusSet& omega, double radius,
                                               int n, const LatticePoint& x, const std::vector<int>& quad_nodes = {});

}  // namespace aniso
