#include "aniso/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "aniso/quadrature.hpp"

namespace aniso {

namespace {

using Cplx = std::complex<double>;

Cplx composite_complex(const std::function<Cplx(double)>& f, double a, double b, int panels)
{
    const GaussRule& gl = gauss_legendre(32);
    const double h = (b - a) / panels;
    Cplx s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        Cplx ps = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            ps += gl.weights[i] * f(lo + 0.5 * h * (gl.nodes[i] + 1.0));
        s += 0.5 * h * ps;
    }
    return s;
}

}  // namespace

VdcReport van_der_corput_check(const OscillatoryInstance& inst, int quad_nodes)
{
    if (!(inst.b > inst.a))
        throw std::invalid_argument("van_der_corput_check: empty interval");
    if (!(inst.lambda1 > 0.0) && !(inst.lambda2 > 0.0))
        throw std::invalid_argument("van_der_corput_check: need lambda1 > 0 or lambda2 > 0");
    const int samples = 8192;
    double d2_min = std::numeric_limits<double>::infinity(), d2_max = -d2_min, d2_abs = 0.0, d1_abs = 0.0;
    VdcReport rep;
    for (int i = 0; i <= samples; ++i) {
        double t = inst.a + (inst.b - inst.a) * i / samples;
        double d2 = inst.phase_d2(t);
        d2_min = std::min(d2_min, d2);
        d2_max = std::max(d2_max, d2);
        d2_abs = std::max(d2_abs, std::abs(d2));
        d1_abs = std::max(d1_abs, std::abs(inst.phase_d1(t)));
        rep.g_sup = std::max(rep.g_sup, std::abs(inst.amplitude(t)));
    }
    const double tol = 1e-12 * std::max(1.0, d2_abs);
    if (d2_min < -tol && d2_max > tol)
        throw std::domain_error("van_der_corput_check: f'' changes sign on [a, b]");

    const double oscillations = d1_abs * (inst.b - inst.a) / (2.0 * M_PI);
    const int panels = std::max({16, static_cast<int>(std::ceil(4.0 * oscillations)), quad_nodes / 32});
    auto integrand = [&](double t) { return std::polar(1.0, inst.phase(t)) * inst.amplitude(t); };
    Cplx coarse = composite_complex(integrand, inst.a, inst.b, panels);
    Cplx fine = composite_complex(integrand, inst.a, inst.b, 2 * panels);
    rep.integral_abs = std::abs(fine);
    rep.quad_error = std::abs(fine - coarse) + 1e-14 * (inst.b - inst.a) * rep.g_sup;
    rep.g_prime_l1 =
        composite_complex([&](double t) { return Cplx(std::abs(inst.amplitude_d1(t))); }, inst.a, inst.b, 2 * panels)
            .real();
    double factor = std::numeric_limits<double>::infinity();
    if (inst.lambda1 > 0.0)
        factor = std::min(factor, 4.0 / inst.lambda1);
    if (inst.lambda2 > 0.0)
        factor = std::min(factor, 8.0 / std::sqrt(inst.lambda2));
    rep.bound = factor * (rep.g_sup + rep.g_prime_l1);
    rep.pass = rep.integral_abs <= rep.bound + rep.quad_error;
    return rep;
}

OscillatoryInstance quadratic_instance(double lambda, double a, double b)
{
    OscillatoryInstance inst;
    inst.a = a;
    inst.b = b;
    inst.phase = [lambda](double x) { return 0.5 * lambda * x * x; };
    inst.phase_d1 = [lambda](double x) { return lambda * x; };
    inst.phase_d2 = [lambda](double) { return lambda; };
    inst.amplitude = [](double) { return Cplx(1.0); };
    inst.amplitude_d1 = [](double) { return Cplx(0.0); };
    inst.lambda1 = (a > 0.0 || b < 0.0) ? std::abs(lambda) * std::min(std::abs(a), std::abs(b)) : 0.0;
    inst.lambda2 = std::abs(lambda);
    inst.label = "quadratic";
    return inst;
}

std::vector<OscillatoryInstance> random_vdc_instances(int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    std::vector<OscillatoryInstance> out;
    while (static_cast<int>(out.size()) < count) {
        const double a = uni(-2.0, 2.0), b = a + uni(0.5, 3.0);
        const double c1 = uni(-30.0, 30.0), c2 = uni(-50.0, 50.0);
        const double c3 = out.size() % 2 == 0 ? 0.0 : uni(-10.0, 10.0);
        auto d1 = [=](double x) { return c1 + 2.0 * c2 * x + 3.0 * c3 * x * x; };
        auto d2 = [=](double x) { return 2.0 * c2 + 6.0 * c3 * x; };
        if (d2(a) * d2(b) <= 0.0)
            continue;
        OscillatoryInstance inst;
        inst.a = a;
        inst.b = b;
        inst.phase = [=](double x) { return x * (c1 + x * (c2 + x * c3)); };
        inst.phase_d1 = d1;
        inst.phase_d2 = d2;
        inst.lambda2 = std::min(std::abs(d2(a)), std::abs(d2(b)));
        // min |f'| over [a, b]: endpoints, the vertex of f', or 0 at a root
        double lam1 = std::min(std::abs(d1(a)), std::abs(d1(b)));
        if (d1(a) * d1(b) <= 0.0)
            lam1 = 0.0;
        if (c3 != 0.0) {
            double v = -c2 / (3.0 * c3);
            if (v > a && v < b) {
                if (d1(v) * d1(a) <= 0.0)
                    lam1 = 0.0;
                else
                    lam1 = std::min(lam1, std::abs(d1(v)));
            }
        }
        inst.lambda1 = lam1;
        const double p0 = uni(-1.0, 1.0), p1 = uni(-1.0, 1.0), q = uni(-1.0, 1.0), kappa = uni(0.0, 5.0);
        inst.amplitude = [=](double x) { return Cplx(p0 + p1 * x, q * std::sin(kappa * x)); };
        inst.amplitude_d1 = [=](double x) { return Cplx(p1, q * kappa * std::cos(kappa * x)); };
        inst.label = c3 == 0.0 ? "quadratic" : "cubic";
        out.push_back(inst);
    }
    return out;
}

namespace {

Eigen::VectorXd power_scale(const Eigen::VectorXd& v, const Eigen::VectorXd& exponents, double t)
{
    Eigen::VectorXd out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j)
        out(j) = std::pow(t, exponents(j)) * v(j);
    return out;
}

Eigen::VectorXd weights_e(const PointClassification& c)
{
    Eigen::VectorXd e(c.m.size());
    for (std::size_t j = 0; j < c.m.size(); ++j)
        e(j) = 1.0 / (2.0 * c.m[j]);
    return e;
}

const std::vector<double>& delta_ladder()
{
    static const std::vector<double> d{0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
    return d;
}

}  // namespace

PhaseFamilyReport phase_family_check(const PointClassification& c, int n, const std::vector<Eigen::VectorXd>& x_list,
                                     std::size_t eta_count, int theta_count)
{
    if (c.type != PointType::imaginary_homogeneous)
        throw std::invalid_argument("phase_family_check: needs an imaginary homogeneous point");
    PhaseFamilyReport rep;
    rep.mu = to_double(c.mu);
    const Eigen::VectorXd e = weights_e(c);
    const Eigen::VectorXd f = e / rep.mu;
    std::vector<Eigen::VectorXd> etas;
    double inf_q = std::numeric_limits<double>::infinity();
    for (const auto& xi : weighted_sphere_grid(c.m, eta_count)) {
        double q = std::abs(c.Q.eval(xi));
        Eigen::VectorXd eta = power_scale(xi, e, 1.0 / q);
        inf_q = std::min(inf_q, std::abs(c.Q.eval(eta)));
        etas.push_back(eta);
    }
    rep.rho = inf_q / 3.0;
    const double target = rep.rho / rep.mu * std::pow(n, rep.mu);
    const double theta_lo = std::pow(n, -rep.mu);
    for (double delta : delta_ladder()) {
        const double theta_hi = std::pow(delta, rep.mu);
        if (theta_hi <= theta_lo)
            break;
        double min_ratio = std::numeric_limits<double>::infinity();
        for (const auto& eta : etas) {
            const double q_eta = c.Q.eval(eta);
            for (int i = 0; i <= theta_count; ++i) {
                double th = theta_lo * std::pow(theta_hi / theta_lo, static_cast<double>(i) / theta_count);
                Eigen::VectorXd y = power_scale(eta, f, th);
                Eigen::VectorXd dy = (f.array() * y.array()).matrix() / th;  // d/dtheta theta^F eta
                double base = -n * (1.0 / rep.mu) * std::pow(th, 1.0 / rep.mu - 1.0) * q_eta;
                if (!c.Q_tail.empty())
                    base -= n * c.Q_tail.gradient(y).dot(dy);
                for (const auto& x : x_list)
                    min_ratio = std::min(min_ratio, std::abs(base - x.dot(dy)) / target);
                if (x_list.empty())
                    min_ratio = std::min(min_ratio, std::abs(base) / target);
            }
        }
        rep.delta = delta;
        rep.min_ratio = min_ratio;
        if (min_ratio >= 1.0) {
            rep.pass = true;
            return rep;
        }
    }
    return rep;
}

AmplitudeReport amplitude_check(const PointClassification& c, const std::vector<int>& ns, double beta,
                                std::size_t eta_count, int theta_count)
{
    if (c.type == PointType::unclassified)
        throw std::invalid_argument("amplitude_check: point is unclassified");
    AmplitudeReport rep;
    const double mu = to_double(c.mu), k = to_double(c.k);
    const Eigen::VectorXd e = weights_e(c);
    const Eigen::VectorXd f = e / mu;
    std::vector<Eigen::VectorXd> etas;
    for (const auto& xi : weighted_sphere_grid(c.m, eta_count))
        etas.push_back(power_scale(xi, e / k, 1.0 / c.R.eval(xi)));
    auto exponent = [&](const Eigen::VectorXd& y) { return c.R.eval(y) + (c.R_tail.empty() ? 0.0 : c.R_tail.eval(y)); };
    for (double delta : delta_ladder()) {
        const double theta_hi = std::pow(delta, mu);
        double sup = 0.0, variation = 0.0;
        for (int n : ns)
            for (const auto& eta : etas) {
                double prev = 1.0, tv = 0.0;  // g(0) = 1
                for (int i = 1; i <= theta_count; ++i) {
                    double th = theta_hi * i / theta_count;
                    double g = std::exp(-n * exponent(power_scale(eta, f, th)));
                    sup = std::max(sup, g);
                    tv += std::abs(g - prev);
                    prev = g;
                }
                variation = std::max(variation, tv);
            }
        rep.delta = delta;
        rep.max_sup = sup;
        rep.max_variation = variation;
        if (sup <= 1.0 + 1e-12 && variation <= beta) {
            rep.pass = true;
            return rep;
        }
    }
    return rep;
}

}  // namespace aniso
