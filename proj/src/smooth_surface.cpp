#include "aniso/smooth_surface.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include <boost/math/interpolators/pchip.hpp>

#include "aniso/quadrature.hpp"
#include "aniso/sampling.hpp"

namespace aniso {

Vector chart_point(const PosHomFunction& p, const ChartPatch& c, const Vector& u)
{
    return polar_decompose(p, c.direction(u)).eta;
}

Matrix chart_jacobian(const PosHomFunction& p, const ChartPatch& c, const Vector& u)
{
    const int d = p.dim();
    const int m = c.param_dim();
    if (c.direction_jacobian) {
        // eta = P(w)^{-E} w  =>  D eta = P(w)^{-E} D w - (grad P(w) . D w / P(w)) E eta
        Vector w = c.direction(u);
        Matrix dw = c.direction_jacobian(u);
        double pw = p.eval(w);
        Matrix scale = p.group().dilate(1.0 / pw);
        Vector eta = scale * w;
        Vector g = grad(p, w);
        Matrix out = scale * dw;
        Vector e_eta = p.exponent().matrix() * eta;
        for (int j = 0; j < m; ++j)
            out.col(j) -= (g.dot(dw.col(j)) / pw) * e_eta;
        return out;
    }
    Matrix out(d, m);
    for (int j = 0; j < m; ++j) {
        double h = 1e-6 * (1.0 + std::abs(u(j)));
        Vector a = u, b = u;
        a(j) += h;
        b(j) -= h;
        out.col(j) = (chart_point(p, c, a) - chart_point(p, c, b)) / (2.0 * h);
    }
    return out;
}

ChartPatch angle_chart(double lo, double hi)
{
    if (!(hi > lo))
        throw std::invalid_argument("angle_chart: empty interval");
    ChartPatch c;
    c.kind = "angle";
    c.u_lo = Vector::Constant(1, lo);
    c.u_hi = Vector::Constant(1, hi);
    c.direction = [](const Vector& u) {
        Vector w(2);
        w << std::cos(u(0)), std::sin(u(0));
        return w;
    };
    c.direction_jacobian = [](const Vector& u) {
        Matrix j(2, 1);
        j << -std::sin(u(0)), std::cos(u(0));
        return j;
    };
    return c;
}

ChartPatch spherical_chart(int pole_axis)
{
    if (pole_axis < 0 || pole_axis > 2)
        throw std::invalid_argument("spherical_chart: pole axis must be 0, 1 or 2");
    const int a = (pole_axis + 1) % 3, b = (pole_axis + 2) % 3;
    ChartPatch c;
    c.kind = "spherical";
    c.u_lo = Vector(2);
    c.u_hi = Vector(2);
    c.u_lo << 0.0, -M_PI;
    c.u_hi << M_PI, M_PI;
    c.direction = [=](const Vector& u) {
        Vector w(3);
        w(a) = std::sin(u(0)) * std::cos(u(1));
        w(b) = std::sin(u(0)) * std::sin(u(1));
        w(pole_axis) = std::cos(u(0));
        return w;
    };
    c.direction_jacobian = [=](const Vector& u) {
        Matrix j(3, 2);
        j(a, 0) = std::cos(u(0)) * std::cos(u(1));
        j(b, 0) = std::cos(u(0)) * std::sin(u(1));
        j(pole_axis, 0) = -std::sin(u(0));
        j(a, 1) = -std::sin(u(0)) * std::sin(u(1));
        j(b, 1) = std::sin(u(0)) * std::cos(u(1));
        j(pole_axis, 1) = 0.0;
        return j;
    };
    return c;
}

ChartPatch table_chart(const std::vector<double>& u_nodes, const std::vector<double>& angles)
{
    if (u_nodes.size() != angles.size() || u_nodes.size() < 4)
        throw std::invalid_argument("table_chart: need at least four matching samples");
    for (std::size_t i = 1; i < u_nodes.size(); ++i)
        if (!(u_nodes[i] > u_nodes[i - 1]) || !(angles[i] > angles[i - 1]))
            throw std::invalid_argument("table_chart: samples must be strictly increasing");
    using Spline = boost::math::interpolators::pchip<std::vector<double>>;
    auto spline = std::make_shared<Spline>(std::vector<double>(u_nodes), std::vector<double>(angles));
    ChartPatch c;
    c.kind = "table";
    c.u_lo = Vector::Constant(1, u_nodes.front());
    c.u_hi = Vector::Constant(1, u_nodes.back());
    c.direction = [spline](const Vector& u) {
        double a = (*spline)(u(0));
        Vector w(2);
        w << std::cos(a), std::sin(a);
        return w;
    };
    c.direction_jacobian = [spline](const Vector& u) {
        double a = (*spline)(u(0)), da = spline->prime(u(0));
        Matrix j(2, 1);
        j << -std::sin(a) * da, std::cos(a) * da;
        return j;
    };
    return c;
}

double chart_level_residual(const PosHomFunction& p, const ChartPatch& c, int per_axis)
{
    double worst = 0.0;
    for (const auto& t : box_grid(c.param_dim(), 0.0, 1.0, per_axis)) {
        // interior points only
        Vector u = c.u_lo.array() + (0.02 + 0.96 * t.array()) * (c.u_hi - c.u_lo).array();
        worst = std::max(worst, std::abs(p.eval(chart_point(p, c, u)) - 1.0));
    }
    return worst;
}

Vector grad(const PosHomFunction& p, const Vector& x) { return p.gradient(x); }

SurfaceCheck euler_identity_check(const PosHomFunction& p, const std::vector<Vector>& sphere_points)
{
    SurfaceCheck rep;
    const Matrix& e = p.exponent().matrix();
    for (const auto& w : sphere_points) {
        Vector eta = polar_decompose(p, w).eta;
        rep.max_residual = std::max(rep.max_residual, std::abs(grad(p, eta).dot(e * eta) - 1.0));
    }
    rep.pass = rep.max_residual <= 1e-8;
    return rep;
}

double chart_density(const PosHomFunction& p, const ChartPatch& c, const Vector& u)
{
    const int d = p.dim();
    if (c.param_dim() != d - 1)
        throw std::invalid_argument("chart_density: chart dimension must be d - 1");
    Vector eta = chart_point(p, c, u);
    Matrix m(d, d);
    m.col(0) = p.exponent().matrix() * eta;
    m.rightCols(d - 1) = chart_jacobian(p, c, u);
    double h = m.determinant();
    if (!(std::abs(h) >= 1e-12))
        throw std::domain_error("chart_density: degenerate chart (|h| < 1e-12)");
    return h;
}

namespace {

double bump(double s)
{
    return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
}

// C-infinity step: 0 for t <= a, 1 for t >= b
double smooth_step(double t, double a, double b)
{
    auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    double s = (t - a) / (b - a);
    double p = f(s), q = f(1.0 - s);
    return p + q > 0.0 ? p / (p + q) : 0.0;
}

double wrap_angle(double a)
{
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0.0)
        a += 2.0 * M_PI;
    return a - M_PI;
}

}  // namespace

Atlas default_atlas(int dim)
{
    Atlas atlas;
    if (dim == 2) {
        const double w = 0.4 * M_PI;
        auto raw = [w](int k, const Vector& om) {
            return bump(wrap_angle(std::atan2(om(1), om(0)) - k * M_PI / 2) / w);
        };
        for (int k = 0; k < 4; ++k) {
            const double c = k * M_PI / 2;
            AtlasPiece piece{angle_chart(c - w, c + w), nullptr};
            piece.weight = [raw, k](const Vector& om) {
                double tot = 0.0;
                for (int j = 0; j < 4; ++j)
                    tot += raw(j, om);
                return raw(k, om) / tot;
            };
            atlas.push_back(piece);
        }
        return atlas;
    }
    if (dim == 3) {
        // chart with pole on axis a is kept away from that pole
        auto raw = [](int axis, const Vector& om) {
            double n2 = om.squaredNorm();
            return smooth_step(1.0 - om(axis) * om(axis) / n2, 0.1, 0.3);
        };
        for (int axis : {2, 0}) {
            int other = axis == 2 ? 0 : 2;
            AtlasPiece piece{spherical_chart(axis), nullptr};
            piece.weight = [raw, axis, other](const Vector& om) {
                double a = raw(axis, om), b = raw(other, om);
                return a / (a + b);
            };
            atlas.push_back(piece);
        }
        return atlas;
    }
    throw std::invalid_argument("default_atlas: only d = 2 and d = 3 are supported");
}

ChartIntegral chart_integrate(const PosHomFunction& p, const Atlas& atlas, const std::function<double(const Vector&)>& g,
                              double rel_tol, int min_panels)
{
    if (atlas.empty())
        throw std::invalid_argument("chart_integrate: empty atlas");
    const GaussRule& gl = gauss_legendre(64);

    auto integrate = [&](int panels) {
        std::vector<double> per_chart(atlas.size(), 0.0);
        parallel_blocks(atlas.size(), [&](std::size_t ci) {
            const auto& piece = atlas[ci];
            const ChartPatch& c = piece.chart;
            const int m = c.param_dim();
            const int per_axis = panels * 64;
            const Vector width = (c.u_hi - c.u_lo) / panels;
            std::vector<int> idx(m, 0);
            double total = 0.0;
            Vector u(m);
            while (true) {
                double w = 1.0;
                for (int j = 0; j < m; ++j) {
                    int panel = idx[j] / 64, node = idx[j] % 64;
                    double lo = c.u_lo(j) + panel * width(j);
                    u(j) = lo + 0.5 * width(j) * (gl.nodes[node] + 1.0);
                    w *= 0.5 * width(j) * gl.weights[node];
                }
                Vector om = c.direction(u);
                double kappa = piece.weight(om);
                double cover = 0.0;
                for (const auto& other : atlas)
                    cover += other.weight(om);
                if (!(std::abs(cover - 1.0) <= 1e-6))
                    throw std::runtime_error("chart_integrate: partition of unity residual exceeds 1e-6");
                if (kappa != 0.0) {
                    Vector eta = chart_point(p, c, u);
                    total += w * kappa * g(eta) * std::abs(chart_density(p, c, u));
                }
                int j = 0;
                while (j < m && ++idx[j] == per_axis)
                    idx[j++] = 0;
                if (j == m)
                    break;
            }
            per_chart[ci] = total;
        });
        double s = 0.0;
        for (double v : per_chart)
            s += v;
        return s;
    };

    ChartIntegral res;
    double prev = integrate(min_panels);
    for (int panels = 2 * min_panels; panels <= 64; panels *= 2) {
        double cur = integrate(panels);
        res = {cur, std::abs(cur - prev), panels};
        if (res.last_change <= rel_tol * std::max(1e-300, std::abs(cur)))
            return res;
        prev = cur;
    }
    return res;
}

SurfaceCheck volume_form_ratio_check(const PosHomFunction& p, const ChartPatch& c, int points)
{
    if (p.dim() != 2)
        throw std::invalid_argument("volume_form_ratio_check: d = 2 charts only");
    SurfaceCheck rep;
    for (int i = 0; i < points; ++i) {
        Vector u = Vector::Constant(1, c.u_lo(0) + (i + 0.5) / points * (c.u_hi(0) - c.u_lo(0)));
        double speed = chart_jacobian(p, c, u).norm();
        double lhs = std::abs(chart_density(p, c, u)) * grad(p, chart_point(p, c, u)).norm();
        rep.max_residual = std::max(rep.max_residual, std::abs(lhs - speed) / speed);
    }
    rep.pass = rep.max_residual <= 1e-8;
    return rep;
}

}  // namespace aniso
