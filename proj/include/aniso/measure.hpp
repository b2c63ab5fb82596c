#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aniso/homogeneous.hpp"
#include "aniso/report.hpp"

namespace aniso {

// Predicate-defined subset F of S, evaluated at projected points.
struct SurfaceRegion {
    std::function<bool(const Vector&)> predicate;
    std::string description;
    bool everything = false;
    bool nothing = false;

    bool contains(const Vector& eta) const;

    static SurfaceRegion all();
    static SurfaceRegion none();
    // eta_axis > 0 (or < 0)
    static SurfaceRegion halfspace(int axis, bool positive = true);
    // d = 2: polar angle of eta in [lo, hi), angles taken in [-pi, pi)
    static SurfaceRegion arc(double lo, double hi);
    // eta_1 > 0 and eta_2 > 0
    static SurfaceRegion quadrant();

    // O F = {O eta : eta in F}
    SurfaceRegion transformed(const Matrix& o) const;
    SurfaceRegion unite(const SurfaceRegion& other) const;
    SurfaceRegion intersect(const SurfaceRegion& other) const;
    SurfaceRegion complement() const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};
using SigmaEstimate = Estimate;

struct ComplexEstimate {
    std::complex<double> value;
    double std_error_re = 0.0;
    double std_error_im = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

struct SamplingBox {
    Vector lo;
    Vector hi;
    int doublings = 0;
    double volume() const;
};

inline constexpr std::size_t default_samples = 1000000;

// Smallest [-2^k, 2^k]^d with P > level on its boundary grid.
SamplingBox bounding_box(const PosHomFunction& p, double level = 1.0);

// QMC mean of f over the box times its volume, with iid-style stderr.
Estimate box_integrate(const std::function<double(const Vector&)>& f, const SamplingBox& box, std::size_t n,
                       std::uint64_t seed);
ComplexEstimate box_integrate_complex(const std::function<std::complex<double>(const Vector&)>& f,
                                      const SamplingBox& box, std::size_t n, std::uint64_t seed);

SigmaEstimate quasi_cone_volume(const PosHomFunction& p, const SurfaceRegion& f, std::size_t n = default_samples,
                                std::uint64_t seed = 1);
SigmaEstimate sigma(const PosHomFunction& p, const SurfaceRegion& f, std::size_t n = default_samples,
                    std::uint64_t seed = 1);

Estimate integrate_on_S(const PosHomFunction& p, const std::function<double(const Vector&)>& g,
                        std::size_t n = default_samples, std::uint64_t seed = 1);
ComplexEstimate integrate_on_S_complex(const PosHomFunction& p,
                                       const std::function<std::complex<double>(const Vector&)>& g,
                                       std::size_t n = default_samples, std::uint64_t seed = 1);

enum class FubiniOrder { radial_outer, sphere_outer };

// Integer p with p e_j and p mu integral, so that r = R t^p makes the radial
// integrand polynomial in t near 0; returns 0 if none up to 64.
int radial_power(const PosHomFunction& p);

// int f dx = int_0^R r^{mu-1} int_S f(r^E eta) sigma(d eta) dr; the radial
// integral is Gauss-Legendre in t with r = R t^p (p from radial_power), or
// in u = r^mu when no such p exists.
Estimate polar_integrate(const PosHomFunction& p, const std::function<double(const Vector&)>& f, double cutoff,
                         std::size_t n = default_samples, std::uint64_t seed = 1, int radial_nodes = 64,
                         FubiniOrder order = FubiniOrder::radial_outer);
ComplexEstimate polar_integrate_complex(const PosHomFunction& p,
                                        const std::function<std::complex<double>(const Vector&)>& f,
                                        double cutoff, std::size_t n = default_samples, std::uint64_t seed = 1,
                                        int radial_nodes = 64);

// Direct d-dimensional QMC of f over the bounding box of {P < level}.
Estimate direct_integrate(const PosHomFunction& p, const std::function<double(const Vector&)>& f, double level,
                          std::size_t n = default_samples, std::uint64_t seed = 1);

// |a - b| <= 3 sqrt(sa^2 + sb^2)
bool agree(double a, double sa, double b, double sb, double k = 3.0);

CheckReport e_independence_test(const PosHomFunction& p, const Endomorphism& e1, const Endomorphism& e2,
                                const SurfaceRegion& f, std::size_t n = default_samples, std::uint64_t seed = 1);
CheckReport sym_invariance_test(const PosHomFunction& p, const Matrix& o, const SurfaceRegion& f,
                                std::size_t n = default_samples, std::uint64_t seed = 1);
CheckReport shell_derivative_check(const PosHomFunction& p, const std::function<double(const Vector&)>& f,
                                   double r0, double h, std::size_t n = default_samples, std::uint64_t seed = 1);
ComplexEstimate surface_ft(const PosHomFunction& p, const Vector& x, std::size_t n = default_samples,
                           std::uint64_t seed = 1);
// Two rows: real and imaginary parts.
std::vector<CheckReport> ft_relation_check(const PosHomFunction& p, const Vector& x,
                                           std::size_t n = default_samples, std::uint64_t seed = 1,
                                           int radial_nodes = 64);
// int exp(-(m/2) R) dx against 2^mu Gamma(mu) sigma_R(S) m^{-mu}
CheckReport gaussian_moment_check(const PosHomFunction& r, double m, std::size_t n = default_samples,
                                  std::uint64_t seed = 1);

}  // namespace aniso
