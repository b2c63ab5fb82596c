#include "aniso/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace aniso {

namespace {

GaussRule build_rule(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-16)
                break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels, int n)
{
    const GaussRule& rule = gauss_legendre(n);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h, half = 0.5 * h, mid = lo + half;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += rule.weights[i] * f(mid + half * rule.nodes[i]);
        total += half * s;
    }
    return total;
}

AdaptiveResult refine_gauss(const std::function<double(double)>& f, double a, double b,
                            double rel_tol, int n, int max_panels)
{
    AdaptiveResult res;
    double prev = composite_gauss(f, a, b, 1, n);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        double cur = composite_gauss(f, a, b, panels, n);
        res.value = cur;
        res.error = std::abs(cur - prev);
        res.panels = panels;
        if (res.error <= rel_tol * std::max(1e-300, std::abs(cur)))
            return res;
        prev = cur;
    }
    return res;
}

}  // namespace aniso
