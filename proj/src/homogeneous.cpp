#include "aniso/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aniso/sampling.hpp"

namespace aniso {

struct PosHomFunction::Impl {
    int dim = 0;
    HomKind kind = HomKind::custom;
    std::string name;
    Endomorphism e = Endomorphism::identity(1);
    DilationGroup group{Endomorphism::identity(1)};
    Evaluator eval;
    Polynomial poly{1};
    std::vector<int> weights;
    double alpha = 0.0;

    Impl(int d, HomKind k, std::string n, const Endomorphism& ex, Evaluator ev)
        : dim(d), kind(k), name(std::move(n)), e(ex), group(ex), eval(std::move(ev)), poly(d)
    {
    }
};

PosHomFunction::PosHomFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

int PosHomFunction::dim() const { return impl_->dim; }
HomKind PosHomFunction::kind() const { return impl_->kind; }
const std::string& PosHomFunction::name() const { return impl_->name; }
const Endomorphism& PosHomFunction::exponent() const { return impl_->e; }
const DilationGroup& PosHomFunction::group() const { return impl_->group; }
double PosHomFunction::order() const { return impl_->e.trace(); }

double PosHomFunction::eval(const Vector& x) const
{
    if (x.size() != impl_->dim)
        throw std::invalid_argument("P eval: dimension mismatch");
    return impl_->eval(x);
}

Rational PosHomFunction::eval_exact(const std::vector<Rational>& x) const
{
    if (impl_->kind != HomKind::semi_elliptic)
        throw std::logic_error("exact evaluation needs a semi-elliptic polynomial");
    return impl_->poly.eval_exact(x);
}

const Polynomial& PosHomFunction::polynomial() const
{
    if (impl_->kind != HomKind::semi_elliptic)
        throw std::logic_error("not a semi-elliptic polynomial");
    return impl_->poly;
}

const std::vector<int>& PosHomFunction::weights() const { return impl_->weights; }

double PosHomFunction::alpha() const
{
    if (impl_->kind != HomKind::norm_power)
        throw std::logic_error("not a norm power");
    return impl_->alpha;
}

bool PosHomFunction::has_analytic_gradient() const
{
    return impl_->kind == HomKind::semi_elliptic || impl_->kind == HomKind::norm_power;
}

Vector PosHomFunction::gradient(const Vector& x) const
{
    if (impl_->kind == HomKind::semi_elliptic)
        return impl_->poly.gradient(x);
    if (impl_->kind == HomKind::norm_power) {
        double n = x.norm();
        if (n == 0.0)
            return Vector::Zero(x.size());
        return impl_->alpha * std::pow(n, impl_->alpha - 2.0) * x;
    }
    const double h = 1e-5 * (1.0 + x.norm());
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vector a = x, b = x;
        a(i) += h;
        b(i) -= h;
        g(i) = (eval(a) - eval(b)) / (2.0 * h);
    }
    return g;
}

namespace {

void validate(const PosHomFunction& p)
{
    auto rep = is_contracting(p.exponent());
    if (!rep.contracting())
        throw std::invalid_argument(p.name() + ": exponent is not contracting (" + rep.message + ")");
    if (p.eval(Vector::Zero(p.dim())) != 0.0)
        throw std::invalid_argument(p.name() + ": P(0) != 0");
    for (double radius : {1e-2, 1.0, 1e2})
        if (!(min_on_sphere(p, radius, 2000) > 0.0))
            throw std::invalid_argument(p.name() + ": positive definiteness probe failed");
    double res = homogeneity_residual(p, p.exponent());
    if (!(res <= 1e-9))
        throw std::invalid_argument(p.name() + ": homogeneity residual " + std::to_string(res));
}

}  // namespace

PosHomFunction PosHomFunction::with_exponent(const Endomorphism& e) const
{
    if (e.dim() != dim())
        throw std::invalid_argument("with_exponent: dimension mismatch");
    auto copy = std::make_shared<Impl>(*impl_);
    copy->e = e;
    copy->group = DilationGroup(e);
    PosHomFunction p(copy);
    validate(p);
    return p;
}

PosHomFunction make_norm_power(int dim, double alpha)
{
    if (dim <= 0 || !(alpha > 0.0))
        throw std::invalid_argument("norm_power needs dim > 0 and alpha > 0");
    PosHomFunction::Evaluator ev;
    if (alpha == 1.0)
        ev = [](const Vector& x) { return x.norm(); };
    else if (alpha == 2.0)
        ev = [](const Vector& x) { return x.squaredNorm(); };
    else
        ev = [alpha](const Vector& x) { return std::pow(x.norm(), alpha); };
    std::string name = alpha == 1.0 ? "euclid" + std::to_string(dim)
                                    : alpha == 2.0 ? "euclidsq" + std::to_string(dim)
                                                   : "norm_power(" + std::to_string(alpha) + ")";
    auto impl = std::make_shared<PosHomFunction::Impl>(dim, HomKind::norm_power, name,
                                                       Endomorphism::identity(dim, 1.0 / alpha), ev);
    impl->alpha = alpha;
    PosHomFunction p(impl);
    validate(p);
    return p;
}

PosHomFunction make_semi_elliptic(const Polynomial& poly, const std::vector<int>& n, std::string name)
{
    const int d = poly.dim();
    if (static_cast<int>(n.size()) != d)
        throw std::invalid_argument("semi_elliptic: weight tuple length mismatch");
    for (int w : n)
        if (w <= 0 || w % 2 != 0)
            throw std::invalid_argument("semi_elliptic: weights must be even positive integers");
    for (const auto& [beta, c] : poly.terms())
        if (weighted_degree(beta, n) != 1)
            throw std::invalid_argument("semi_elliptic: term with |beta:n| != 1");
    if (poly.empty())
        throw std::invalid_argument("semi_elliptic: empty polynomial");
    std::vector<double> diag;
    for (int w : n)
        diag.push_back(1.0 / w);
    Polynomial copy = poly;
    auto impl = std::make_shared<PosHomFunction::Impl>(
        d, HomKind::semi_elliptic, std::move(name), Endomorphism::diagonal(diag),
        [copy](const Vector& x) { return copy.eval(x); });
    impl->poly = poly;
    impl->weights = n;
    PosHomFunction p(impl);
    validate(p);
    return p;
}

PosHomFunction make_weierstrass(const PosHomFunction& q, std::function<double(const Vector&)> f, std::string name)
{
    const int d = q.dim();
    for (const auto& w : sphere_grid(d, 10000)) {
        Vector eta = polar_decompose(q, w).eta;
        double v = f(eta);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(name + ": f is not positive on the probe grid");
    }
    PosHomFunction::Evaluator ev = [q, f](const Vector& x) {
        double qx = q.eval(x);
        if (qx == 0.0)
            return 0.0;
        return qx * f(q.group().apply(1.0 / qx, x));
    };
    auto impl = std::make_shared<PosHomFunction::Impl>(d, HomKind::weierstrass, std::move(name), q.exponent(), ev);
    PosHomFunction p(impl);
    validate(p);
    return p;
}

PosHomFunction make_custom(int dim, PosHomFunction::Evaluator eval, const Endomorphism& e, std::string name)
{
    if (e.dim() != dim)
        throw std::invalid_argument("custom: exponent dimension mismatch");
    auto impl = std::make_shared<PosHomFunction::Impl>(dim, HomKind::custom, std::move(name), e, std::move(eval));
    PosHomFunction p(impl);
    validate(p);
    return p;
}

PosHomFunction p1()
{
    Polynomial poly(2, {{{2, 0}, Rational(1)}, {{0, 4}, Rational(1)}});
    return make_semi_elliptic(poly, {2, 4}, "p1");
}

PosHomFunction p2()
{
    Polynomial poly(2, {{{2, 0}, Rational(1)}, {{1, 2}, Rational(3, 2)}, {{0, 4}, Rational(1)}});
    return make_semi_elliptic(poly, {2, 4}, "p2");
}

double weierstrass_w(double t, int terms)
{
    double s = 0.0, scale = 0.5, freq = 3.0;
    for (int n = 1; n <= terms; ++n) {
        s += scale * std::cos(freq * t);
        scale *= 0.5;
        freq *= 3.0;
    }
    return s;
}

PosHomFunction weierstrass_example()
{
    return make_weierstrass(make_norm_power(2, 1.0),
                            [](const Vector& eta) { return weierstrass_w(std::atan2(eta(1), eta(0))) + 3.0; },
                            "weierstrass");
}

PosHomFunction builtin(const std::string& name)
{
    if (name == "p1")
        return p1();
    if (name == "p2")
        return p2();
    if (name == "weierstrass")
        return weierstrass_example();
    auto dim_suffix = [&](const std::string& prefix) -> int {
        if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size())
            return 0;
        std::string rest = name.substr(prefix.size());
        if (!std::all_of(rest.begin(), rest.end(), ::isdigit))
            return 0;
        return std::stoi(rest);
    };
    if (int d = dim_suffix("euclidsq"); d > 0)
        return make_norm_power(d, 2.0);
    if (int d = dim_suffix("euclid"); d > 0)
        return make_norm_power(d, 1.0);
    throw std::invalid_argument("unknown built-in function: " + name);
}

std::vector<std::string> builtin_names()
{
    return {"euclid2", "euclidsq2", "euclid3", "euclidsq3", "p1", "p2", "weierstrass"};
}

double homogeneity_residual(const PosHomFunction& p, const Endomorphism& e, std::size_t samples, std::uint64_t seed)
{
    DilationGroup g(e);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lr(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        double r = std::exp(lr(rng));
        Vector x(p.dim());
        for (int i = 0; i < p.dim(); ++i)
            x(i) = ux(rng);
        double px = p.eval(x);
        double res = std::abs(p.eval(g.apply(r, x)) - r * px) / (1.0 + r * px);
        worst = std::max(worst, std::isfinite(res) ? res : INFINITY);
    }
    return worst;
}

double min_on_sphere(const PosHomFunction& p, double radius, std::size_t count)
{
    double mn = INFINITY;
    for (const auto& w : sphere_grid(p.dim(), count))
        mn = std::min(mn, p.eval(radius * w));
    return mn;
}

double level_set_radius(const PosHomFunction& p)
{
    double m = 1.0;
    for (int k = 0; k <= 60; ++k, m *= 2.0)
        if (min_on_sphere(p, m, 4000) > 1.0 && min_on_sphere(p, 2 * m, 4000) > 1.0)
            return m;
    throw std::runtime_error(p.name() + ": no level-set radius within 2^60");
}

std::vector<double> infinity_limit_probe(const PosHomFunction& p, double r0, int doublings)
{
    std::vector<double> out;
    double r = r0;
    for (int k = 0; k <= doublings; ++k, r *= 2.0)
        out.push_back(min_on_sphere(p, r, 4000));
    return out;
}

PolarPoint polar_decompose(const PosHomFunction& p, const Vector& x)
{
    if (x.size() != p.dim())
        throw std::invalid_argument("polar_decompose: dimension mismatch");
    if (x.isZero(0.0))
        throw std::invalid_argument("polar_decompose: x = 0");
    double r = p.eval(x);
    if (!(r > 0.0))
        throw std::domain_error("polar_decompose: P(x) = 0 for x != 0");
    return {r, p.group().apply(1.0 / r, x)};
}

Vector polar_compose(const PosHomFunction& p, double r, const Vector& eta)
{
    if (!(r > 0.0))
        throw std::invalid_argument("polar_compose: r must be positive");
    if (std::abs(p.eval(eta) - 1.0) > 1e-6)
        throw std::invalid_argument("polar_compose: eta is not on S");
    return p.group().apply(r, eta);
}

std::vector<Vector> default_probe_grid(int dim, std::uint64_t seed)
{
    std::vector<Vector> grid;
    auto dirs = sphere_grid(dim, 10000, seed);
    for (double radius : {0.5, 1.0, 2.0})
        for (const auto& w : dirs)
            grid.push_back(radius * w);
    return grid;
}

SymReport sym_check(const PosHomFunction& p, const Matrix& o, const std::vector<Vector>& grid)
{
    if (o.rows() != p.dim() || o.cols() != p.dim())
        throw std::invalid_argument("sym_check: matrix dimension mismatch");
    SymReport rep;
    rep.orthogonality = (o.transpose() * o - Matrix::Identity(p.dim(), p.dim())).norm();
    for (const auto& x : grid) {
        double px = p.eval(x);
        rep.residual = std::max(rep.residual, std::abs(p.eval(o * x) - px) / (1.0 + px));
    }
    rep.pass = rep.residual <= 1e-9 && rep.orthogonality <= 1e-9;
    return rep;
}

Box Box::cube(int dim, double half)
{
    return {Vector::Constant(dim, -half), Vector::Constant(dim, half)};
}

SubhomResult subhom_check(const SubhomCandidate& q, const Endomorphism& e, const Box& k, double eps, int order,
                          int grid_per_axis)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("subhom_check: eps must be positive");
    if (order < 0 || order > 2 || q.derivative_order < order)
        throw std::invalid_argument("subhom_check: derivative order not available");
    const int d = e.dim();
    DilationGroup g(e);
    std::vector<Vector> xs;
    for (const auto& u : box_grid(d, 0.0, 1.0, grid_per_axis))
        xs.push_back(k.lo.array() + u.array() * (k.hi - k.lo).array());

    auto along = [&](const Vector& xi, double r) {
        std::complex<double> v = q.eval(g.apply(r, xi));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("subhom_check: non-finite evaluation");
        return v;
    };

    const int radial = 20;
    double delta = 1.0;
    for (int halving = 0; halving <= 50; ++halving, delta *= 0.5) {
        double worst = 0.0;
        bool ok = true;
        for (int i = 0; i < radial && ok; ++i) {
            double r = delta * std::pow(0.01, static_cast<double>(i) / (radial - 1));
            double h = 1e-3 * r;
            for (const auto& xi : xs) {
                std::complex<double> f0 = along(xi, r);
                double ratio = std::abs(f0) / r;
                if (order >= 1) {
                    std::complex<double> fp = along(xi, r + h), fm = along(xi, r - h);
                    ratio = std::max(ratio, r * std::abs((fp - fm) / (2.0 * h)) / r);
                    if (order >= 2)
                        ratio = std::max(ratio, r * r * std::abs((fp - 2.0 * f0 + fm) / (h * h)) / r);
                }
                worst = std::max(worst, ratio);
                if (ratio > eps) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            return {true, delta, worst};
    }
    return {false, 0.0, 0.0};
}

}  // namespace aniso
