#include <doctest.h>

#include <cmath>

#include "aniso/measure.hpp"
#include "aniso/sampling.hpp"
#include "aniso/smooth_surface.hpp"

using namespace aniso;

namespace {

Vector v(std::initializer_list<double> xs)
{
    Vector out(xs.size());
    int i = 0;
    for (double x : xs)
        out(i++) = x;
    return out;
}

}  // namespace

TEST_CASE("grad examples")
{
    Vector g = grad(builtin("euclidsq2"), v({1, 2}));
    CHECK(g(0) == doctest::Approx(2.0));
    CHECK(g(1) == doctest::Approx(4.0));
    g = grad(p2(), v({1, 1}));
    CHECK(g(0) == doctest::Approx(3.5));
    CHECK(g(1) == doctest::Approx(7.0));
    g = grad(weierstrass_example(), v({0.6, 0.8}));
    CHECK(g.allFinite());
}

TEST_CASE("Euler identity grad P . E eta = 1 on S")
{
    CHECK(euler_identity_check(builtin("euclidsq2"), sphere_grid(2, 100)).max_residual <= 1e-12);
    Vector eta = v({0, 1});
    CHECK(p1().gradient(eta).dot(p1().exponent().matrix() * eta) == doctest::Approx(1.0));
    SurfaceCheck c = euler_identity_check(p2(), sphere_grid(2, 1000));
    CHECK(c.pass);
    CHECK(c.max_residual <= 1e-8);
    CHECK(euler_identity_check(builtin("euclid3"), sphere_grid(3, 500)).pass);
}

TEST_CASE("chart density")
{
    ChartPatch c = angle_chart(-M_PI, M_PI);
    for (double u : {-2.0, 0.1, 1.3}) {
        CHECK(std::abs(chart_density(builtin("euclid2"), c, v({u}))) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(chart_density(builtin("euclidsq2"), c, v({u}))) == doctest::Approx(0.5).epsilon(1e-12));
    }
    ChartPatch flat = angle_chart(0.0, 1.0);
    flat.direction = [](const Vector&) { return v({1.0, 0.0}); };
    flat.direction_jacobian = [](const Vector&) { return Matrix(Matrix::Zero(2, 1)); };
    CHECK_THROWS_AS(chart_density(builtin("euclid2"), flat, v({0.5})), std::domain_error);
    CHECK_THROWS_AS(angle_chart(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("charts land on S")
{
    CHECK(chart_level_residual(p1(), angle_chart(-3.0, 3.0)) <= 1e-12);
    CHECK(chart_level_residual(p2(), angle_chart(0.0, 2.0)) <= 1e-12);
    PosHomFunction q = builtin("euclidsq3");
    CHECK(chart_level_residual(q, spherical_chart(2)) <= 1e-12);
    CHECK_THROWS_AS(spherical_chart(5), std::invalid_argument);
}

TEST_CASE("analytic chart jacobian matches finite differences")
{
    ChartPatch c = angle_chart(-M_PI, M_PI);
    for (double u : {-1.0, 0.4, 2.2}) {
        Matrix j = chart_jacobian(p2(), c, v({u}));
        const double h = 1e-6;
        Vector fd = (chart_point(p2(), c, v({u + h})) - chart_point(p2(), c, v({u - h}))) / (2 * h);
        CHECK((j.col(0) - fd).norm() <= 1e-7 * std::max(1.0, fd.norm()));
    }
}

TEST_CASE("chart integrals")
{
    auto one = [](const Vector&) { return 1.0; };
    CHECK(chart_integrate(builtin("euclid2"), default_atlas(2), one).value == doctest::Approx(2 * M_PI).epsilon(1e-6));
    CHECK(chart_integrate(builtin("euclidsq2"), default_atlas(2), one).value == doctest::Approx(M_PI).epsilon(1e-6));
    CHECK(chart_integrate(builtin("euclid3"), default_atlas(3), one).value == doctest::Approx(4 * M_PI).epsilon(1e-6));
    CHECK(chart_integrate(builtin("euclid2"), default_atlas(2), [](const Vector& x) { return x(0) * x(0); }).value ==
          doctest::Approx(M_PI).epsilon(1e-6));
    CHECK_THROWS_AS(default_atlas(4), std::invalid_argument);
    CHECK_THROWS_AS(chart_integrate(p1(), Atlas{}, one), std::invalid_argument);
}

TEST_CASE("chart integral of P2 agrees with the Monte Carlo measure")
{
    ChartIntegral ci = chart_integrate(p2(), default_atlas(2), [](const Vector&) { return 1.0; });
    SigmaEstimate mc = sigma(p2(), SurfaceRegion::all(), 1000000, 31);
    CHECK(std::abs(ci.value - mc.value) <= 3.0 * mc.std_error);
}

TEST_CASE("volume form ratio |h| |grad P| = speed")
{
    CHECK(volume_form_ratio_check(builtin("euclid2"), angle_chart(-M_PI, M_PI)).max_residual <= 1e-12);
    CHECK(volume_form_ratio_check(builtin("euclidsq2"), angle_chart(-M_PI, M_PI)).max_residual <= 1e-8);
    CHECK(volume_form_ratio_check(p1(), angle_chart(1.2, 1.9)).max_residual <= 1e-8);
    CHECK(volume_form_ratio_check(p2(), angle_chart(-M_PI, M_PI)).pass);
}

TEST_CASE("table charts")
{
    std::vector<double> u{0.0, 0.5, 1.0, 1.5, 2.0}, a{0.0, 0.4, 0.9, 1.3, 1.6};
    ChartPatch t = table_chart(u, a);
    CHECK(chart_level_residual(p1(), t) <= 1e-12);
    Vector w = t.direction(v({1.0}));
    CHECK(w(0) == doctest::Approx(std::cos(0.9)));
    CHECK_THROWS_AS(table_chart({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(table_chart({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 3.0}), std::invalid_argument);
}
