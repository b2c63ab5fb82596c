#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aniso/expansion.hpp"

namespace aniso {

// int_a^b e^{i f} g with lower bounds lambda1 <= |f'| and lambda2 <= |f''|
// (a bound of 0 means "not used").
struct OscillatoryInstance {
    double a = 0.0;
    double b = 1.0;
    std::function<double(double)> phase;
    std::function<double(double)> phase_d1;
    std::function<double(double)> phase_d2;
    std::function<std::complex<double>(double)> amplitude;
    std::function<std::complex<double>(double)> amplitude_d1;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::string label;
};

struct VdcReport {
    double integral_abs = 0.0;
    double quad_error = 0.0;
    double g_sup = 0.0;
    double g_prime_l1 = 0.0;
    double bound = 0.0;  // min(4/lambda1, 8/sqrt(lambda2)) (|g|_inf + |g'|_1)
    bool pass = false;
};

// Throws when neither lambda is positive or f'' changes sign on [a, b].
VdcReport van_der_corput_check(const OscillatoryInstance& inst, int quad_nodes = 1 << 14);

// f = lambda x^2 / 2 on [a, b] with g = 1
OscillatoryInstance quadratic_instance(double lambda, double a, double b);

// Polynomial phases of degree 2 or 3 with f'' of one sign, lambda1 and
// lambda2 computed in closed form, and smooth complex amplitudes.
std::vector<OscillatoryInstance> random_vdc_instances(int count, std::uint64_t seed);

// Phase family f(theta) = -n Q(theta^F eta) - n Q_tail(theta^F eta) - x . theta^F eta,
// F = E / mu, E = diag(1/2m), for eta on {|Q| = 1}.
struct PhaseFamilyReport {
    double rho = 0.0;        // inf over the eta grid of |Q| / 3
    double mu = 0.0;
    double delta = 0.0;      // largest tried delta for which the bound holds
    double min_ratio = 0.0;  // min |f'(theta)| / ((rho/mu) n^mu) at that delta
    bool pass = false;
};
PhaseFamilyReport phase_family_check(const PointClassification& c, int n, const std::vector<Eigen::VectorXd>& x_list,
                                     std::size_t eta_count = 200, int theta_count = 200);

// Amplitudes g(theta) = exp(-n (R + R_tail)(theta^F eta)), F = E / mu, for eta on {R = 1}.
struct AmplitudeReport {
    double delta = 0.0;
    double max_sup = 0.0;         // max of |g| over the grid
    double max_variation = 0.0;   // max over (n, eta) of int |g'| on (0, delta^mu]
    bool pass = false;            // max_sup <= 1 and max_variation <= beta
};
AmplitudeReport amplitude_check(const PointClassification& c, const std::vector<int>& ns, double beta = 3.0,
                                std::size_t eta_count = 200, int theta_count = 4000);

}  // namespace aniso
