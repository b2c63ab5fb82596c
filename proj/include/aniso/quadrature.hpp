#pragma once

#include <functional>
#include <vector>

namespace aniso {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule by Newton iteration on P_n.
const GaussRule& gauss_legendre(int n);

// Composite rule: `panels` equal panels on [a, b], `n` nodes each.
double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels, int n = 64);

// Doubles the panel count until successive values agree to rel_tol.
struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;  // |last - previous|
    int panels = 0;
};
AdaptiveResult refine_gauss(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-8, int n = 64, int max_panels = 1 << 14);

}  // namespace aniso
