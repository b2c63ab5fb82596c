#include <doctest.h>

#include <cmath>
#include <random>

#include "aniso/homogeneous.hpp"

using namespace aniso;

namespace {

Vector v2(double a, double b)
{
    Vector x(2);
    x << a, b;
    return x;
}

Matrix diag2(double a, double b)
{
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("built-in functions evaluate")
{
    CHECK(builtin("euclidsq2").eval(v2(3, 4)) == doctest::Approx(25.0));
    CHECK(builtin("euclid2").eval(v2(3, 4)) == doctest::Approx(5.0));
    CHECK(p1().eval(v2(1, 1)) == doctest::Approx(2.0));
    CHECK(p2().eval(v2(1, 1)) == doctest::Approx(3.5));
    CHECK(p1().eval_exact({Rational(1, 2), Rational(1, 3)}) == Rational(1, 4) + Rational(1, 81));
    CHECK(p1().order() == doctest::Approx(0.75));
    CHECK(builtin("euclid3").order() == doctest::Approx(3.0));
    CHECK_THROWS_AS(builtin("nosuchfunction"), std::invalid_argument);
}

TEST_CASE("constructor validation")
{
    CHECK_THROWS_AS(make_norm_power(2, -1.0), std::invalid_argument);
    Polynomial bad(2, {{{2, 0}, Rational(1)}, {{0, 2}, Rational(1)}});
    CHECK_THROWS_AS(make_semi_elliptic(bad, {2, 4}), std::invalid_argument);
    Polynomial odd(2, {{{2, 0}, Rational(1)}, {{0, 3}, Rational(1)}});
    CHECK_THROWS_AS(make_semi_elliptic(odd, {2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(p1().with_exponent(Endomorphism::identity(2)), std::invalid_argument);
    CHECK_NOTHROW(p1().with_exponent(Endomorphism::diagonal({0.5, 0.25})));
}

TEST_CASE("gradients")
{
    Vector g = builtin("euclidsq2").gradient(v2(1, 2));
    CHECK(g(0) == doctest::Approx(2.0));
    CHECK(g(1) == doctest::Approx(4.0));
    Vector x = v2(0.7, -0.3);
    g = p1().gradient(x);
    CHECK(g(0) == doctest::Approx(1.4));
    CHECK(g(1) == doctest::Approx(4.0 * std::pow(-0.3, 3)));
    g = p2().gradient(v2(1, 1));
    CHECK(g(0) == doctest::Approx(3.5));
    CHECK(g(1) == doctest::Approx(7.0));
}

TEST_CASE("Weierstrass composite")
{
    PosHomFunction w = weierstrass_example();
    CHECK(homogeneity_residual(w, w.exponent(), 200, 3) <= 1e-9);
    // P = |x| (w(Arg x) + 3)
    Vector x = v2(-1.2, 0.4);
    CHECK(w.eval(x) == doctest::Approx(x.norm() * (weierstrass_w(std::atan2(0.4, -1.2)) + 3.0)).epsilon(1e-12));
    CHECK(w.order() == doctest::Approx(2.0));

    PosHomFunction q = builtin("euclid2");
    PosHomFunction one = make_weierstrass(q, [](const Vector&) { return 1.0; });
    PosHomFunction two = make_weierstrass(q, [](const Vector&) { return 2.0; });
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    for (int i = 0; i < 20; ++i) {
        Vector y = v2(n01(rng), n01(rng));
        CHECK(one.eval(y) == doctest::Approx(q.eval(y)).epsilon(1e-12));
        CHECK(two.eval(y) == doctest::Approx(2.0 * y.norm()).epsilon(1e-12));
    }
    CHECK(two.order() == doctest::Approx(2.0));
}

TEST_CASE("polar decomposition examples")
{
    PolarPoint pp = polar_decompose(builtin("euclid2"), v2(3, 4));
    CHECK(pp.r == doctest::Approx(5.0));
    CHECK(pp.eta(0) == doctest::Approx(0.6));
    CHECK(pp.eta(1) == doctest::Approx(0.8));

    pp = polar_decompose(p1(), v2(0, 2));
    CHECK(pp.r == doctest::Approx(16.0));
    CHECK(pp.eta(0) == doctest::Approx(0.0));
    CHECK(pp.eta(1) == doctest::Approx(1.0));
    CHECK(p1().eval(v2(0, 1)) == 1.0);

    Vector back = polar_compose(p1(), 16.0, v2(0, 1));
    CHECK(back(1) == doctest::Approx(2.0));
    Vector half = polar_compose(builtin("euclidsq2"), 4.0, v2(1, 0));
    CHECK(half(0) == doctest::Approx(2.0));
    Vector same = polar_compose(p2(), 1.0, polar_decompose(p2(), v2(0.3, 0.9)).eta);
    CHECK((same - polar_decompose(p2(), v2(0.3, 0.9)).eta).norm() < 1e-14);

    CHECK_THROWS_AS(polar_decompose(p1(), v2(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(polar_compose(p1(), -1.0, v2(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(polar_compose(p1(), 1.0, v2(0, 2)), std::invalid_argument);
}

TEST_CASE("property: compose(decompose(x)) = x")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    for (const auto& p : {p1(), p2(), builtin("euclid2"), weierstrass_example()})
        for (int i = 0; i < 50; ++i) {
            Vector x = v2(3.0 * n01(rng), 3.0 * n01(rng));
            PolarPoint pp = polar_decompose(p, x);
            CHECK(p.eval(pp.eta) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK((polar_compose(p, pp.r, pp.eta) - x).norm() <= 1e-9 * std::max(1.0, x.norm()));
        }
}

TEST_CASE("property: P(r^E x) = r P(x)")
{
    for (const auto& p : {p1(), p2(), builtin("euclid2"), builtin("euclidsq2"), builtin("euclid3")})
        CHECK(homogeneity_residual(p, p.exponent(), 200, 4) <= 1e-12);
}

TEST_CASE("symmetry probes")
{
    SUBCASE("rotations preserve norm powers")
    {
        auto grid = default_probe_grid(2, 1);
        for (double angle : {0.3, 1.1, 2.9}) {
            Matrix o(2, 2);
            o << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
            CHECK(sym_check(builtin("euclid2"), o, grid).pass);
            CHECK(sym_check(make_norm_power(2, 3.0), o, grid).pass);
        }
    }
    SUBCASE("D2 for P1")
    {
        auto grid = default_probe_grid(2, 1);
        for (auto [a, b] : {std::pair{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}})
            CHECK(sym_check(p1(), diag2(a, b), grid).pass);
        Matrix swap(2, 2);
        swap << 0, 1, 1, 0;
        CHECK_FALSE(sym_check(p1(), swap, grid).pass);
    }
    SUBCASE("P2 keeps only y -> -y")
    {
        auto grid = default_probe_grid(2, 1);
        CHECK_FALSE(sym_check(p2(), diag2(-1, 1), grid).pass);
        CHECK(sym_check(p2(), diag2(1, -1), grid).pass);
    }
}

TEST_CASE("subhomogeneity")
{
    const Endomorphism half = Endomorphism::identity(2, 0.5);
    const Box k = Box::cube(2, 1.0);
    SubhomCandidate zero{[](const Vector&) { return std::complex<double>(0.0); }, 2, 1.0};
    SubhomResult r = subhom_check(zero, half, k, 0.1, 2);
    CHECK(r.pass);
    CHECK(r.delta == 1.0);

    SubhomCandidate quartic{[](const Vector& x) { return std::complex<double>(x.squaredNorm() * x.squaredNorm()); }, 2, 1.0};
    r = subhom_check(quartic, half, k, 0.1, 0);
    CHECK(r.pass);
    // |Q(r^{I/2} xi)| = r^2 |xi|^4 <= eps r  iff  r <= eps / 4 on [-1,1]^2
    CHECK(r.delta <= 0.1 / 4.0);
    CHECK(r.delta > 0.1 / 8.0);

    SubhomCandidate square{[](const Vector& x) { return std::complex<double>(x.squaredNorm()); }, 2, 1.0};
    CHECK_FALSE(subhom_check(square, half, k, 0.5, 0).pass);
    CHECK_THROWS_AS(subhom_check(square, half, k, -1.0, 0), std::invalid_argument);
}

TEST_CASE("level set probes")
{
    CHECK(min_on_sphere(builtin("euclid2"), 2.0) == doctest::Approx(2.0));
    CHECK(level_set_radius(p1()) >= 1.0);
    auto probe = infinity_limit_probe(p1(), 1.0, 6);
    CHECK(probe.size() == 7);
    for (std::size_t i = 1; i < probe.size(); ++i)
        CHECK(probe[i] > probe[i - 1]);
}
