#include "aniso/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "aniso/quadrature.hpp"
#include "aniso/sampling.hpp"

namespace aniso {

bool SurfaceRegion::contains(const Vector& eta) const
{
    if (everything)
        return true;
    if (nothing)
        return false;
    return predicate(eta);
}

SurfaceRegion SurfaceRegion::all()
{
    SurfaceRegion r;
    r.predicate = [](const Vector&) { return true; };
    r.description = "all";
    r.everything = true;
    return r;
}

SurfaceRegion SurfaceRegion::none()
{
    SurfaceRegion r;
    r.predicate = [](const Vector&) { return false; };
    r.description = "empty";
    r.nothing = true;
    return r;
}

SurfaceRegion SurfaceRegion::halfspace(int axis, bool positive)
{
    SurfaceRegion r;
    r.predicate = [axis, positive](const Vector& eta) { return positive ? eta(axis) > 0.0 : eta(axis) < 0.0; };
    r.description = std::string(positive ? "pos:" : "neg:") + std::to_string(axis);
    return r;
}

SurfaceRegion SurfaceRegion::arc(double lo, double hi)
{
    SurfaceRegion r;
    r.predicate = [lo, hi](const Vector& eta) {
        double a = std::atan2(eta(1), eta(0));
        if (a >= M_PI)
            a -= 2.0 * M_PI;
        return a >= lo && a < hi;
    };
    r.description = "arc:" + format_double(lo) + ":" + format_double(hi);
    return r;
}

SurfaceRegion SurfaceRegion::quadrant()
{
    SurfaceRegion r;
    r.predicate = [](const Vector& eta) { return eta(0) > 0.0 && eta(1) > 0.0; };
    r.description = "quadrant";
    return r;
}

SurfaceRegion SurfaceRegion::transformed(const Matrix& o) const
{
    if (everything || nothing)
        return *this;
    Matrix inv = o.inverse();
    SurfaceRegion r;
    auto pred = predicate;
    r.predicate = [pred, inv](const Vector& eta) { return pred(inv * eta); };
    r.description = "O(" + description + ")";
    return r;
}

SurfaceRegion SurfaceRegion::unite(const SurfaceRegion& other) const
{
    SurfaceRegion r;
    auto a = *this, b = other;
    r.predicate = [a, b](const Vector& eta) { return a.contains(eta) || b.contains(eta); };
    r.description = "(" + description + ")|(" + other.description + ")";
    r.everything = everything || other.everything;
    r.nothing = nothing && other.nothing;
    return r;
}

SurfaceRegion SurfaceRegion::intersect(const SurfaceRegion& other) const
{
    SurfaceRegion r;
    auto a = *this, b = other;
    r.predicate = [a, b](const Vector& eta) { return a.contains(eta) && b.contains(eta); };
    r.description = "(" + description + ")&(" + other.description + ")";
    r.everything = everything && other.everything;
    r.nothing = nothing || other.nothing;
    return r;
}

SurfaceRegion SurfaceRegion::complement() const
{
    SurfaceRegion r;
    auto a = *this;
    r.predicate = [a](const Vector& eta) { return !a.contains(eta); };
    r.description = "!(" + description + ")";
    r.everything = nothing;
    r.nothing = everything;
    return r;
}

double SamplingBox::volume() const { return (hi - lo).prod(); }

namespace {

constexpr std::size_t block_size = 1 << 14;

struct Welford {
    double n = 0.0, mean = 0.0, m2 = 0.0;

    void add(double x)
    {
        n += 1.0;
        double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    void merge(const Welford& b)
    {
        if (b.n == 0.0)
            return;
        double tot = n + b.n;
        double delta = b.mean - mean;
        mean += delta * b.n / tot;
        m2 += b.m2 + delta * delta * n * b.n / tot;
        n = tot;
    }

    double std_error() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

using PointFn = std::function<void(const Vector&, double*)>;
// Per-block hook: receives the block's points and writes `comps` values per point.
using BlockFn = std::function<void(const std::vector<Vector>&, std::vector<double>&)>;

std::vector<Welford> qmc_blocks(const SamplingBox& box, std::size_t n, std::uint64_t seed, int comps,
                                const BlockFn& fn)
{
    if (n < 2)
        throw std::invalid_argument("at least two samples required");
    const int d = static_cast<int>(box.lo.size());
    ScrambledSobol qmc(d, seed);
    const std::size_t blocks = (n + block_size - 1) / block_size;
    std::vector<std::vector<Welford>> partial(blocks, std::vector<Welford>(comps));
    const Vector width = box.hi - box.lo;
    parallel_blocks(blocks, [&](std::size_t b) {
        std::size_t first = b * block_size;
        std::size_t count = std::min(block_size, n - first);
        std::vector<double> u;
        qmc.block(first, count, u);
        std::vector<Vector> xs(count, Vector(d));
        for (std::size_t i = 0; i < count; ++i)
            for (int j = 0; j < d; ++j)
                xs[i](j) = box.lo(j) + u[i * d + j] * width(j);
        std::vector<double> out(count * comps, 0.0);
        fn(xs, out);
        for (std::size_t i = 0; i < count; ++i)
            for (int c = 0; c < comps; ++c) {
                double v = out[i * comps + c];
                if (!std::isfinite(v))
                    throw std::domain_error("non-finite integrand value");
                partial[b][c].add(v);
            }
    });
    std::vector<Welford> total(comps);
    for (const auto& part : partial)
        for (int c = 0; c < comps; ++c)
            total[c].merge(part[c]);
    return total;
}

std::vector<Welford> qmc_points(const SamplingBox& box, std::size_t n, std::uint64_t seed, int comps,
                                const PointFn& fn)
{
    return qmc_blocks(box, n, seed, comps, [&](const std::vector<Vector>& xs, std::vector<double>& out) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            fn(xs[i], out.data() + i * comps);
    });
}

Estimate make_estimate(const Welford& w, double scale, std::size_t n, std::uint64_t seed)
{
    return {scale * w.mean, std::abs(scale) * w.std_error(), n, seed};
}

// Projects x onto S when 0 < P(x) < 1.
bool project(const PosHomFunction& p, const Vector& x, Vector& eta)
{
    double r = p.eval(x);
    if (!(r > 0.0 && r < 1.0))
        return false;
    eta = p.group().apply(1.0 / r, x);
    return true;
}

struct RadialRule {
    std::vector<double> r;
    std::vector<double> w;  // includes r^{mu-1} dr
    std::vector<Matrix> dil;
};

RadialRule radial_rule(const PosHomFunction& p, double cutoff, int nodes)
{
    if (!(cutoff > 0.0))
        throw std::invalid_argument("radial cutoff must be positive");
    const GaussRule& gl = gauss_legendre(nodes);
    const double mu = p.order();
    const int pw = radial_power(p);
    RadialRule rule;
    for (int k = 0; k < nodes; ++k) {
        double t = 0.5 * (gl.nodes[k] + 1.0);
        double r, w;
        if (pw > 0) {
            r = cutoff * std::pow(t, pw);
            w = 0.5 * gl.weights[k] * std::pow(cutoff, mu) * pw * std::pow(t, pw * mu - 1.0);
        } else {
            double u = t * std::pow(cutoff, mu);
            r = std::pow(u, 1.0 / mu);
            w = 0.5 * gl.weights[k] * std::pow(cutoff, mu) / mu;
        }
        rule.r.push_back(r);
        rule.w.push_back(w);
        rule.dil.push_back(p.group().dilate(r));
    }
    return rule;
}

using ComplexFn = std::function<std::complex<double>(const Vector&)>;

std::vector<Welford> polar_moments(const PosHomFunction& p, const PointFn& f, int comps, double cutoff,
                                   std::size_t n, std::uint64_t seed, int radial_nodes, FubiniOrder order,
                                   SamplingBox& box)
{
    box = bounding_box(p, 1.0);
    const RadialRule rule = radial_rule(p, cutoff, radial_nodes);
    const double mu = p.order();
    const int d = p.dim();
    return qmc_blocks(box, n, seed, comps, [&](const std::vector<Vector>& xs, std::vector<double>& out) {
        std::vector<std::size_t> hit;
        std::vector<Vector> etas;
        Vector eta(d);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (project(p, xs[i], eta)) {
                hit.push_back(i);
                etas.push_back(eta);
            }
        Vector y(d);
        std::vector<double> buf(comps);
        auto accumulate = [&](std::size_t h, std::size_t k) {
            y.noalias() = rule.dil[k] * etas[h];
            std::fill(buf.begin(), buf.end(), 0.0);
            f(y, buf.data());
            for (int c = 0; c < comps; ++c)
                out[hit[h] * comps + c] += mu * rule.w[k] * buf[c];
        };
        if (order == FubiniOrder::radial_outer) {
            for (std::size_t k = 0; k < rule.r.size(); ++k)
                for (std::size_t h = 0; h < hit.size(); ++h)
                    accumulate(h, k);
        } else {
            for (std::size_t h = 0; h < hit.size(); ++h)
                for (std::size_t k = 0; k < rule.r.size(); ++k)
                    accumulate(h, k);
        }
    });
}

}  // namespace

SamplingBox bounding_box(const PosHomFunction& p, double level)
{
    if (!(level > 0.0))
        throw std::invalid_argument("bounding_box: level must be positive");
    const int d = p.dim();
    const std::size_t total = (std::size_t(1) << d) * d * 32;
    const std::size_t per_face = total / (2 * d);
    int per_axis = 1;
    if (d > 1)
        per_axis = std::max(2, static_cast<int>(std::lround(std::pow(double(per_face), 1.0 / (d - 1)))));
    for (int k = 0; k <= 60; ++k) {
        const double half = std::ldexp(1.0, k);
        double mn = INFINITY;
        for (int axis = 0; axis < d; ++axis)
            for (double side : {-half, half}) {
                if (d == 1) {
                    mn = std::min(mn, p.eval(Vector::Constant(1, side)));
                    continue;
                }
                for (const auto& g : box_grid(d - 1, -half, half, per_axis)) {
                    Vector x(d);
                    for (int j = 0, m = 0; j < d; ++j)
                        x(j) = j == axis ? side : g(m++);
                    mn = std::min(mn, p.eval(x));
                }
            }
        if (mn > level)
            return {Vector::Constant(d, -half), Vector::Constant(d, half), k};
    }
    throw std::runtime_error(p.name() + ": bounding box search exceeded 60 doublings");
}

Estimate box_integrate(const std::function<double(const Vector&)>& f, const SamplingBox& box, std::size_t n,
                       std::uint64_t seed)
{
    auto w = qmc_points(box, n, seed, 1, [&](const Vector& x, double* out) { out[0] = f(x); });
    return make_estimate(w[0], box.volume(), n, seed);
}

ComplexEstimate box_integrate_complex(const std::function<std::complex<double>(const Vector&)>& f,
                                      const SamplingBox& box, std::size_t n, std::uint64_t seed)
{
    auto w = qmc_points(box, n, seed, 2, [&](const Vector& x, double* out) {
        auto v = f(x);
        out[0] = v.real();
        out[1] = v.imag();
    });
    auto re = make_estimate(w[0], box.volume(), n, seed);
    auto im = make_estimate(w[1], box.volume(), n, seed);
    return {{re.value, im.value}, re.std_error, im.std_error, n, seed};
}

SigmaEstimate quasi_cone_volume(const PosHomFunction& p, const SurfaceRegion& f, std::size_t n, std::uint64_t seed)
{
    if (n < 1000)
        throw std::invalid_argument("quasi_cone_volume: n must be at least 1000");
    if (f.nothing)
        return {0.0, 0.0, n, seed};
    SamplingBox box = bounding_box(p, 1.0);
    const int d = p.dim();
    auto w = qmc_points(box, n, seed, 1, [&](const Vector& x, double* out) {
        Vector eta(d);
        out[0] = project(p, x, eta) && f.contains(eta) ? 1.0 : 0.0;
    });
    return make_estimate(w[0], box.volume(), n, seed);
}

SigmaEstimate sigma(const PosHomFunction& p, const SurfaceRegion& f, std::size_t n, std::uint64_t seed)
{
    SigmaEstimate v = quasi_cone_volume(p, f, n, seed);
    v.value *= p.order();
    v.std_error *= p.order();
    return v;
}

Estimate integrate_on_S(const PosHomFunction& p, const std::function<double(const Vector&)>& g, std::size_t n,
                        std::uint64_t seed)
{
    SamplingBox box = bounding_box(p, 1.0);
    const int d = p.dim();
    auto w = qmc_points(box, n, seed, 1, [&](const Vector& x, double* out) {
        Vector eta(d);
        out[0] = project(p, x, eta) ? g(eta) : 0.0;
    });
    return make_estimate(w[0], box.volume() * p.order(), n, seed);
}

ComplexEstimate integrate_on_S_complex(const PosHomFunction& p,
                                       const std::function<std::complex<double>(const Vector&)>& g, std::size_t n,
                                       std::uint64_t seed)
{
    SamplingBox box = bounding_box(p, 1.0);
    const int d = p.dim();
    auto w = qmc_points(box, n, seed, 2, [&](const Vector& x, double* out) {
        Vector eta(d);
        if (project(p, x, eta)) {
            auto v = g(eta);
            out[0] = v.real();
            out[1] = v.imag();
        }
    });
    const double scale = box.volume() * p.order();
    auto re = make_estimate(w[0], scale, n, seed);
    auto im = make_estimate(w[1], scale, n, seed);
    return {{re.value, im.value}, re.std_error, im.std_error, n, seed};
}

int radial_power(const PosHomFunction& p)
{
    std::vector<double> exps;
    const auto& e = p.exponent();
    if (e.is_diagonal()) {
        for (int i = 0; i < e.dim(); ++i)
            exps.push_back(e.matrix()(i, i));
    } else {
        for (auto lam : e.eigenvalues())
            exps.push_back(lam.real());
    }
    exps.push_back(p.order());
    auto integral = [](double v) { return std::abs(v - std::round(v)) < 1e-9; };
    for (int q = 1; q <= 64; ++q)
        if (std::all_of(exps.begin(), exps.end(), [&](double v) { return integral(q * v); }))
            return q;
    return 0;
}

Estimate polar_integrate(const PosHomFunction& p, const std::function<double(const Vector&)>& f, double cutoff,
                         std::size_t n, std::uint64_t seed, int radial_nodes, FubiniOrder order)
{
    SamplingBox box;
    auto w = polar_moments(
        p, [&](const Vector& y, double* out) { out[0] = f(y); }, 1, cutoff, n, seed, radial_nodes, order, box);
    return make_estimate(w[0], box.volume(), n, seed);
}

ComplexEstimate polar_integrate_complex(const PosHomFunction& p,
                                        const std::function<std::complex<double>(const Vector&)>& f,
                                        double cutoff, std::size_t n, std::uint64_t seed, int radial_nodes)
{
    SamplingBox box;
    auto w = polar_moments(
        p,
        [&](const Vector& y, double* out) {
            auto v = f(y);
            out[0] = v.real();
            out[1] = v.imag();
        },
        2, cutoff, n, seed, radial_nodes, FubiniOrder::radial_outer, box);
    auto re = make_estimate(w[0], box.volume(), n, seed);
    auto im = make_estimate(w[1], box.volume(), n, seed);
    return {{re.value, im.value}, re.std_error, im.std_error, n, seed};
}

Estimate direct_integrate(const PosHomFunction& p, const std::function<double(const Vector&)>& f, double level,
                          std::size_t n, std::uint64_t seed)
{
    return box_integrate(f, bounding_box(p, level), n, seed);
}

bool agree(double a, double sa, double b, double sb, double k)
{
    return std::abs(a - b) <= k * std::sqrt(sa * sa + sb * sb);
}

namespace {

CheckReport make_report(std::string name, const Estimate& l, const Estimate& r, std::uint64_t seed, std::size_t n)
{
    CheckReport rep{std::move(name), l.value, r.value, l.std_error, r.std_error, false, seed, n};
    rep.pass = agree(l.value, l.std_error, r.value, r.std_error);
    return rep;
}

}  // namespace

CheckReport e_independence_test(const PosHomFunction& p, const Endomorphism& e1, const Endomorphism& e2,
                                const SurfaceRegion& f, std::size_t n, std::uint64_t seed)
{
    PosHomFunction a = p.with_exponent(e1);
    PosHomFunction b = p.with_exponent(e2);
    return make_report("e_independence", sigma(a, f, n, seed), sigma(b, f, n, seed + 1), seed, n);
}

CheckReport sym_invariance_test(const PosHomFunction& p, const Matrix& o, const SurfaceRegion& f, std::size_t n,
                                std::uint64_t seed)
{
    auto sym = sym_check(p, o, default_probe_grid(p.dim()));
    if (!sym.pass)
        throw std::invalid_argument("sym_invariance_test: O is not a symmetry of P");
    // common random numbers: O = I reproduces the estimate exactly
    return make_report("sym_invariance", sigma(p, f.transformed(o), n, seed), sigma(p, f, n, seed), seed, n);
}

CheckReport shell_derivative_check(const PosHomFunction& p, const std::function<double(const Vector&)>& f,
                                   double r0, double h, std::size_t n, std::uint64_t seed)
{
    if (!(r0 > h && h > 0.0))
        throw std::invalid_argument("shell_derivative_check: need r0 > h > 0");
    Estimate lhs = direct_integrate(
        p,
        [&](const Vector& x) {
            double v = p.eval(x);
            return v > r0 - h && v < r0 + h ? f(x) / (2.0 * h) : 0.0;
        },
        r0 + h, n, seed);
    Matrix t = p.group().dilate(r0);
    Estimate inner = integrate_on_S(p, [&](const Vector& eta) { return f(t * eta); }, n, seed + 1);
    double scale = std::pow(r0, p.order() - 1.0);
    Estimate rhs{scale * inner.value, scale * inner.std_error, n, seed + 1};
    CheckReport rep = make_report("shell_derivative", lhs, rhs, seed, n);
    double tol = std::max(3.0 * std::hypot(lhs.std_error, rhs.std_error), 5.0 * h * h * std::max(1.0, std::abs(rhs.value)));
    rep.pass = std::abs(lhs.value - rhs.value) <= tol;
    return rep;
}

ComplexEstimate surface_ft(const PosHomFunction& p, const Vector& x, std::size_t n, std::uint64_t seed)
{
    const double norm = std::pow(2.0 * M_PI, -p.dim());
    return integrate_on_S_complex(
        p, [&](const Vector& eta) { return norm * std::exp(std::complex<double>(0.0, -eta.dot(x))); }, n, seed);
}

std::vector<CheckReport> ft_relation_check(const PosHomFunction& p, const Vector& x, std::size_t n,
                                           std::uint64_t seed, int radial_nodes)
{
    const double norm = std::pow(2.0 * M_PI, -p.dim());
    auto wave = [&](const Vector& y) { return norm * std::exp(std::complex<double>(0.0, -y.dot(x))); };
    ComplexEstimate lhs = box_integrate_complex(
        [&](const Vector& y) { return p.eval(y) < 1.0 ? wave(y) : std::complex<double>(0.0); },
        bounding_box(p, 1.0), n, seed);
    ComplexEstimate rhs = polar_integrate_complex(p, wave, 1.0, n, seed + 1, radial_nodes);
    std::vector<CheckReport> rows;
    rows.push_back(make_report("ft_relation_re", {lhs.value.real(), lhs.std_error_re, n, seed},
                               {rhs.value.real(), rhs.std_error_re, n, seed + 1}, seed, n));
    rows.push_back(make_report("ft_relation_im", {lhs.value.imag(), lhs.std_error_im, n, seed},
                               {rhs.value.imag(), rhs.std_error_im, n, seed + 1}, seed, n));
    return rows;
}

CheckReport gaussian_moment_check(const PosHomFunction& r, double m, std::size_t n, std::uint64_t seed)
{
    if (!(m > 0.0))
        throw std::invalid_argument("gaussian_moment_check: m must be positive");
    // e^{-(m/2) R} < e^{-40} outside {R < 80/m}
    Estimate lhs = direct_integrate(r, [&](const Vector& x) { return std::exp(-0.5 * m * r.eval(x)); }, 80.0 / m, n,
                                    seed);
    Estimate s = sigma(r, SurfaceRegion::all(), n, seed + 1);
    const double mu = r.order();
    const double c = std::pow(2.0, mu) * boost::math::tgamma(mu) * std::pow(m, -mu);
    return make_report("gaussian_moment", lhs, {c * s.value, c * s.std_error, n, seed + 1}, seed, n);
}

}  // namespace aniso
