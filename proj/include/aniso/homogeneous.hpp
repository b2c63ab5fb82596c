#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/polynomial.hpp"

namespace aniso {

enum class HomKind { norm_power, semi_elliptic, weierstrass, custom };

// A positive homogeneous function P together with one designated exponent
// E in Exp(P). Immutable; copies share state.
class PosHomFunction {
public:
    using Evaluator = std::function<double(const Vector&)>;

    int dim() const;
    HomKind kind() const;
    const std::string& name() const;
    const Endomorphism& exponent() const;
    const DilationGroup& group() const;
    double order() const;  // tr E

    double operator()(const Vector& x) const { return eval(x); }
    double eval(const Vector& x) const;
    // semi_elliptic only
    Rational eval_exact(const std::vector<Rational>& x) const;
    const Polynomial& polynomial() const;
    const std::vector<int>& weights() const;
    double alpha() const;  // norm_power only

    // Analytic for polynomial kinds, central differences otherwise.
    Vector gradient(const Vector& x) const;
    bool has_analytic_gradient() const;

    // Same function, different designated exponent; rejected unless the
    // homogeneity probe passes for the new E.
    PosHomFunction with_exponent(const Endomorphism& e) const;

    struct Impl;
    explicit PosHomFunction(std::shared_ptr<const Impl> impl);

private:
    std::shared_ptr<const Impl> impl_;
};

PosHomFunction make_norm_power(int dim, double alpha);
// sum a_beta x^beta with |beta : n| = 1 for every term; n even positive.
PosHomFunction make_semi_elliptic(const Polynomial& p, const std::vector<int>& n, std::string name = "semi_elliptic");
// Q(x) f(Q(x)^{-E} x) with f probed positive on S_Q.
PosHomFunction make_weierstrass(const PosHomFunction& q, std::function<double(const Vector&)> f,
                                std::string name = "weierstrass");
PosHomFunction make_custom(int dim, PosHomFunction::Evaluator eval, const Endomorphism& e, std::string name);

// x^2 + y^4 and x^2 + (3/2) x y^2 + y^4
PosHomFunction p1();
PosHomFunction p2();
// sum_{n=1}^{terms} 2^{-n} cos(3^n t)
double weierstrass_w(double t, int terms = 25);
// |x| on R^2 composed with f = w(Arg) + 3
PosHomFunction weierstrass_example();

// Names: euclid<d>, euclidsq<d>, p1, p2, weierstrass.
PosHomFunction builtin(const std::string& name);
std::vector<std::string> builtin_names();

// max |P(r^E x) - r P(x)| / (1 + r P(x)) over random r in [0.1, 10], x in [-2, 2]^d
double homogeneity_residual(const PosHomFunction& p, const Endomorphism& e, std::size_t samples = 100,
                            std::uint64_t seed = 1);
// min P over a sphere grid scaled by the given radius
double min_on_sphere(const PosHomFunction& p, double radius, std::size_t count = 10000);
// M with P(x) > 1 for all sampled |x| >= M
double level_set_radius(const PosHomFunction& p);
// min of P over |x| = R 2^k, k = 0..doublings
std::vector<double> infinity_limit_probe(const PosHomFunction& p, double r0 = 1.0, int doublings = 10);

struct PolarPoint {
    double r = 0.0;
    Vector eta;
};

PolarPoint polar_decompose(const PosHomFunction& p, const Vector& x);
Vector polar_compose(const PosHomFunction& p, double r, const Vector& eta);

struct SymReport {
    bool pass = false;
    double residual = 0.0;
    double orthogonality = 0.0;  // |O^T O - I|
};

std::vector<Vector> default_probe_grid(int dim, std::uint64_t seed = 0);
SymReport sym_check(const PosHomFunction& p, const Matrix& o, const std::vector<Vector>& grid);

struct SubhomCandidate {
    std::function<std::complex<double>(const Vector&)> eval;
    int derivative_order = 2;
    double domain_radius = 1.0;
};

struct SubhomResult {
    bool pass = false;
    double delta = 0.0;
    double worst_ratio = 0.0;  // max |r^j d^j/dr^j Q(r^E xi)| / r at the accepted delta
};

// Axis-aligned box [lo_i, hi_i].
struct Box {
    Vector lo;
    Vector hi;
    static Box cube(int dim, double half);
};

SubhomResult subhom_check(const SubhomCandidate& q, const Endomorphism& e, const Box& k, double eps, int order,
                          int grid_per_axis = 11);

}  // namespace aniso
