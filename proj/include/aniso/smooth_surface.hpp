#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aniso/homogeneous.hpp"

namespace aniso {

// A parameterization u -> eta(u) of a patch of S over the open box U.
// Built from a direction map u -> omega(u) on the Euclidean sphere, pushed to
// S by omega -> P(omega)^{-E} omega.
struct ChartPatch {
    std::string kind;
    Vector u_lo;
    Vector u_hi;
    std::function<Vector(const Vector&)> direction;
    std::function<Matrix(const Vector&)> direction_jacobian;  // d x (d-1)
    int orientation_sign = 1;

    int param_dim() const { return static_cast<int>(u_lo.size()); }
};

Vector chart_point(const PosHomFunction& p, const ChartPatch& c, const Vector& u);
// D_u eta, d x (d-1)
Matrix chart_jacobian(const PosHomFunction& p, const ChartPatch& c, const Vector& u);

// omega(u) = (cos u, sin u), u in (lo, hi)
ChartPatch angle_chart(double lo, double hi);
// omega = sin(t) cos(f) e_a + sin(t) sin(f) e_b + cos(t) e_pole, (t, f) in (0, pi) x (-pi, pi)
ChartPatch spherical_chart(int pole_axis);
// d = 2: omega(u) = (cos a(u), sin a(u)) with a(u) a monotone spline through (u_i, a_i)
ChartPatch table_chart(const std::vector<double>& u_nodes, const std::vector<double>& angles);

// max |P(eta(u)) - 1| over a grid of U
double chart_level_residual(const PosHomFunction& p, const ChartPatch& c, int per_axis = 17);

Vector grad(const PosHomFunction& p, const Vector& x);

struct SurfaceCheck {
    double max_residual = 0.0;
    bool pass = false;
};

// max |grad P(eta) . (E eta) - 1| over the grid (points projected onto S)
SurfaceCheck euler_identity_check(const PosHomFunction& p, const std::vector<Vector>& sphere_points);

// det(E eta(u) | D_u eta(u)); throws when |h| < 1e-12
double chart_density(const PosHomFunction& p, const ChartPatch& c, const Vector& u);

struct AtlasPiece {
    ChartPatch chart;
    std::function<double(const Vector&)> weight;  // kappa_j(omega)
};
using Atlas = std::vector<AtlasPiece>;

// d = 2: four overlapping angle charts; d = 3: two spherical charts with
// poles on different axes. Partition functions are normalized bumps.
Atlas default_atlas(int dim);

struct ChartIntegral {
    double value = 0.0;
    double last_change = 0.0;
    int panels = 0;
};

// sum_j int_U kappa_j g(eta) |h| du by composite Gauss-Legendre, 64 nodes
// per panel and axis, doubling panels until successive values agree to 1e-8.
ChartIntegral chart_integrate(const PosHomFunction& p, const Atlas& atlas, const std::function<double(const Vector&)>& g,
                              double rel_tol = 1e-8, int min_panels = 1);

// d = 2: max over u of | |h(u)| |grad P(eta(u))| - |D_u eta(u)| | / |D_u eta(u)|
SurfaceCheck volume_form_ratio_check(const PosHomFunction& p, const ChartPatch& c, int points = 1000);

}  // namespace aniso
