// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aniso/decay.hpp"
#include "aniso/dilation.hpp"
#include "aniso/expansion.hpp"
#include "aniso/experiment.hpp"
#include "aniso/homogeneous.hpp"
#include "aniso/lattice.hpp"
#include "aniso/measure.hpp"
#include "aniso/oscillatory.hpp"
#include "aniso/smooth_surface.hpp"

using namespace aniso;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = limit_s <= 0 || secs < limit_s;
    bool ok = o.pass && in_time;
    if (!ok)
        ++failures;
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " | " << o.detail;
    char buf[64];
    std::snprintf(buf, sizeof buf, " | %.2f s", secs);
    line << buf;
    if (limit_s > 0) {
        std::snprintf(buf, sizeof buf, " (limit %.0f s)", limit_s);
        line << buf;
    }
    std::cout << line.str() << std::endl;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Eigen::VectorXd xi2(double a, double b)
{
    Eigen::VectorXd x(2);
    x << a, b;
    return x;
}

constexpr std::uint64_t kSeed = 20240601;
constexpr std::size_t kN = 1000000;

}  // namespace

int main()
{
    criterion(1, "group laws for 20 random E and 20 (s,t) pairs", 1.0, [] {
        auto rows = group_law_suite(kSeed, 20, 20);
        double worst = 0.0;
        bool ok = rows.size() == 20;
        for (const auto& r : rows) {
            ok = ok && r.pass;
            worst = std::max(worst, r.value_lhs);
        }
        return Outcome{ok, fmt("%.0f endomorphisms, worst residual %.3g", double(rows.size()), worst)};
    });

    criterion(2, "polar integral of exp(-|x|^2) equals pi", 10.0, [] {
        PosHomFunction p = builtin("euclidsq2");
        Estimate e = polar_integrate(p, [](const Vector& x) { return std::exp(-x.squaredNorm()); }, 40.0, kN, kSeed);
        double rel = std::abs(e.value - M_PI) / M_PI;
        return Outcome{rel <= 0.02, fmt("%.6f vs pi, relative error %.2e", e.value, rel)};
    });

    criterion(3, "Gaussian moment identity for P1, n in {1, 4, 16}", 30.0, [] {
        bool ok = true;
        std::string detail;
        for (double n : {1.0, 4.0, 16.0}) {
            CheckReport r = gaussian_moment_check(p1(), n, kN, kSeed + static_cast<std::uint64_t>(n));
            ok = ok && r.pass;
            detail += fmt("n=%.0f: %.5f vs %.5f (se %.1e); ", n, r.value_lhs, r.value_rhs,
                          std::hypot(r.stderr_lhs, r.stderr_rhs));
        }
        return Outcome{ok, detail};
    });

    criterion(4, "sigma of the unit circle for |x| and |x|^2", 0.0, [] {
        SigmaEstimate a = sigma(builtin("euclid2"), SurfaceRegion::all(), kN, kSeed);
        SigmaEstimate b = sigma(builtin("euclidsq2"), SurfaceRegion::all(), kN, kSeed + 1);
        bool ok = agree(a.value, a.std_error, 2 * M_PI, 0.0) && agree(b.value, b.std_error, M_PI, 0.0);
        return Outcome{ok, fmt("|x|: %.5f +- %.1e vs 2pi; |x|^2: %.5f +- %.1e vs pi", a.value, a.std_error, b.value,
                               b.std_error)};
    });

    criterion(5, "E-independence on a half arc", 0.0, [] {
        Matrix skew(2, 2);
        skew << 1.0, 1.0, -1.0, 1.0;
        CheckReport r = e_independence_test(builtin("euclid2"), Endomorphism::identity(2), Endomorphism(skew),
                                            SurfaceRegion::arc(0.0, M_PI), kN, kSeed);
        return Outcome{r.pass, fmt("E=I: %.5f, E=I+skew: %.5f, combined se %.1e", r.value_lhs, r.value_rhs,
                                   std::hypot(r.stderr_lhs, r.stderr_rhs))};
    });

    criterion(6, "chart integral vs sampled sigma for P2; volume form on the |x|^2 circle", 0.0, [] {
        ChartIntegral ci = chart_integrate(p2(), default_atlas(2), [](const Vector&) { return 1.0; });
        SigmaEstimate mc = sigma(p2(), SurfaceRegion::all(), kN, kSeed);
        SurfaceCheck vf = volume_form_ratio_check(builtin("euclidsq2"), angle_chart(-M_PI, M_PI));
        bool ok = agree(ci.value, 0.0, mc.value, mc.std_error) && vf.max_residual <= 1e-8;
        return Outcome{ok, fmt("chart %.6f vs sampled %.6f +- %.1e; volume form residual %.2e", ci.value, mc.value,
                               mc.std_error, vf.max_residual)};
    });

    criterion(7, "exact classification of example 1", 5.0, [] {
        LatticeFunction phi = load_fixture("example1");
        PowerSeries g = gamma_series(phi, xi2(0, 0));
        const ComplexRational quartic(Rational(0), Rational(-1, 64));
        bool coeffs = g.coefficient({4, 0}) == quartic && g.coefficient({0, 4}) == quartic &&
                      g.coefficient({8, 0}).re == Rational(-15, 8192);
        PointClassification c = classify_point(phi, xi2(0, 0));
        bool cls = c.type == PointType::imaginary_homogeneous && c.drift.size() == 2 && c.drift[0] == 0 &&
                   c.drift[1] == 0 && c.m == std::vector<int>{2, 2} && c.k == Rational(2) && c.mu == Rational(1, 2);
        std::string detail = "Gamma(4,0) = " + to_string(g.coefficient({4, 0}).im) + "i, Re Gamma(8,0) = " +
                             to_string(g.coefficient({8, 0}).re) + ", type " + to_string(c.type) + ", m = (" +
                             std::to_string(c.m.size() > 0 ? c.m[0] : 0) + "," +
                             std::to_string(c.m.size() > 1 ? c.m[1] : 0) + "), k = " + to_string(c.k) +
                             ", mu = " + to_string(c.mu);
        return Outcome{coeffs && cls, detail};
    });

    criterion(8, "maxima and classification of example 3", 0.0, [] {
        LatticeFunction phi = load_fixture("example3");
        MaxModulusSet omega = find_omega(phi);
        if (omega.points.size() != 2)
            return Outcome{false, fmt("found %.0f maxima", double(omega.points.size()))};
        bool at0 = false, atpi = false, ok = true;
        std::vector<PointClassification> cls;
        std::string detail;
        for (const auto& p : omega.points) {
            ok = ok && p.residual <= 1e-9;
            Eigen::VectorXd w = wrap_torus(p.xi);
            PointClassification c = classify_point(phi, p.xi);
            cls.push_back(c);
            if (w.norm() < 1e-9) {
                at0 = true;
                ok = ok && c.type == PointType::imaginary_homogeneous && c.mu == Rational(2, 3);
            } else if ((w - xi2(M_PI, M_PI)).norm() < 1e-9) {
                atpi = true;
                ok = ok && c.type == PointType::positive_homogeneous && c.mu == Rational(1);
            }
            detail += "(" + format_double(w(0)) + "," + format_double(w(1)) + ") " + to_string(c.type) + " mu " +
                      to_string(c.mu) + " residual " + fmt("%.1e", p.residual) + "; ";
        }
        Rational mu = mu_phi(cls);
        detail += "mu_phi " + to_string(mu);
        return Outcome{ok && at0 && atpi && mu == Rational(2, 3), detail};
    });

    criterion(9, "decay exponents of examples 1-3 on [-64,64]^2, n up to 1024 by FFT", 300.0, [] {
        struct Case {
            const char* name;
            double mu;
        };
        bool ok = true;
        std::string detail;
        for (Case c : {Case{"example1", 0.5}, Case{"example2", 0.75}, Case{"example3", 2.0 / 3.0}}) {
            auto rec = decay_curve(load_fixture(c.name), IntegerBox::cube(2, 64), log_schedule(16, 1024));
            SlopeFit f = slope_fit(rec);
            BoundCheck b = theorem_bound_check(rec, c.mu);
            bool here = std::abs(f.slope + c.mu) <= 0.05 && b.pass;
            ok = ok && here;
            detail += std::string(c.name) + fmt(" slope %.4f (target %.4f) C %.3f early %.3f ", f.slope, -c.mu, b.c_hat, b.early_max) +
                      (here ? "ok" : "out of band") + "; ";
        }
        return Outcome{ok, detail};
    });

    criterion(10, "inversion and localized decomposition", 0.0, [] {
        bool ok = true;
        double worst_inv = 0.0, worst_loc = 0.0, worst_s = 0.0;
        for (const char* name : {"example1", "example2", "example3"}) {
            LatticeFunction phi = load_fixture(name);
            for (int n : {1, 2, 4, 8, 16}) {
                InversionReport r = inversion_check(phi, n, {{0, 0}, {1, -2}, {3, 3}, {-5, 0}});
                worst_inv = std::max(worst_inv, r.max_residual);
                ok = ok && r.max_residual <= 1e-9;
            }
            MaxModulusSet omega = find_omega(phi);
            for (LatticePoint x : {LatticePoint{0, 0}, LatticePoint{2, -1}}) {
                LocalizedDecomposition d = localized_decomposition(phi, omega, 0.0, 64, x);
                worst_loc = std::max(worst_loc, d.residual);
                worst_s = std::max(worst_s, d.s);
                ok = ok && d.residual <= 1e-8 && d.s < 1.0;
            }
        }
        return Outcome{ok, fmt("inversion residual %.2e, decomposition residual %.2e, 1 - max complement ratio %.3g",
                               worst_inv, worst_loc, 1.0 - worst_s)};
    });

    criterion(11, "oscillatory integral bound on 50 random instances", 0.0, [] {
        bool ok = true;
        double worst = 0.0;
        for (const auto& inst : random_vdc_instances(50, kSeed)) {
            VdcReport r = van_der_corput_check(inst);
            ok = ok && r.integral_abs <= r.bound + r.quad_error;
            worst = std::max(worst, r.integral_abs / r.bound);
        }
        return Outcome{ok, fmt("largest |I| / bound %.4f", worst)};
    });

    criterion(12, "property suites with fixed seeds", 600.0, [] {
        auto rows = property_suite(kSeed);
        int bad = 0;
        std::string names;
        for (const auto& r : rows)
            if (!r.pass) {
                ++bad;
                names += " " + r.test_name;
            }
        return Outcome{bad == 0 && !rows.empty(),
                       fmt("%.0f of %.0f rows pass", double(rows.size() - bad), double(rows.size())) + names};
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
