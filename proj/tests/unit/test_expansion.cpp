#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "aniso/experiment.hpp"
#include "aniso/expansion.hpp"

using namespace aniso;

namespace {

ComplexRational cr(long pn, long pd, long qn, long qd) { return {Rational(pn, pd), Rational(qn, qd)}; }

Eigen::VectorXd xi2(double a, double b)
{
    Eigen::VectorXd x(2);
    x << a, b;
    return x;
}

BigInt factorial(int n)
{
    BigInt r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

}  // namespace

TEST_CASE("power series arithmetic")
{
    PowerSeries x = PowerSeries::variable(2, 6, 0);
    PowerSeries one = PowerSeries::constant(2, 6, ComplexRational(Rational(1)));
    PowerSeries prod = (one + x) * (one - x);
    CHECK(prod.coefficient({0, 0}) == ComplexRational(Rational(1)));
    CHECK(prod.coefficient({2, 0}) == ComplexRational(Rational(-1)));
    CHECK(prod.terms().size() == 2);

    PowerSeries big = x * x * x * x * x * x * x;
    CHECK(big.terms().empty());
    CHECK((x * x).truncated(1).terms().empty());
    CHECK(std::abs(prod.eval(xi2(0.5, 3.0)) - 0.75) < 1e-15);
}

TEST_CASE("log and exp series")
{
    const int deg = 8;
    PowerSeries one = PowerSeries::constant(2, deg, ComplexRational(Rational(1)));
    CHECK(log_series(one).terms().empty());

    PowerSeries l = log_series(one + PowerSeries::variable(2, deg, 0));
    for (int j = 1; j <= deg; ++j)
        CHECK(l.coefficient({j, 0}) == ComplexRational(Rational(j % 2 ? 1 : -1, j)));
    CHECK(l.terms().size() == static_cast<std::size_t>(deg));

    PowerSeries e = exp_series(PowerSeries::variable(2, deg, 1));
    for (int j = 0; j <= deg; ++j)
        CHECK(e.coefficient({0, j}) == ComplexRational(Rational(BigInt(1), factorial(j))));

    CHECK_THROWS(log_series(PowerSeries::variable(2, deg, 0)));
    CHECK_THROWS(exp_series(one));
}

TEST_CASE("property: exp(log s) = s and log(exp u) = u exactly")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 7);
    for (int trial = 0; trial < 6; ++trial) {
        PowerSeries u(2, 7);
        for (int i = 0; i <= 7; ++i)
            for (int j = 0; i + j <= 7; ++j)
                if (i + j > 0)
                    u.set({i, j}, cr(num(rng), den(rng), num(rng), den(rng)));
        PowerSeries s = u + PowerSeries::constant(2, 7, ComplexRational(Rational(1)));
        CHECK(exp_series(log_series(s)) == s);
        CHECK(log_series(exp_series(u)) == u);
    }
}

TEST_CASE("Taylor expansions")
{
    PowerSeries d = taylor_at(LatticeFunction::delta(2), xi2(0, 0), 6);
    CHECK(d.terms().size() == 1);
    CHECK(d.constant_term() == ComplexRational(Rational(1)));

    LatticeFunction walk = LatticeFunction::exact(
        1, {{{-1}, ComplexRational(Rational(1, 2))}, {{1}, ComplexRational(Rational(1, 2))}});
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    PowerSeries c = taylor_at(walk, zero, 8);
    for (int j = 0; j <= 8; j += 2)
        CHECK(c.coefficient({j}) == ComplexRational(Rational(BigInt((j / 2) % 2 ? -1 : 1), factorial(j))));
    CHECK(c.coefficient({1}).is_zero());

    LatticeFunction e1 = load_fixture("example1");
    PowerSeries t = taylor_at(e1, xi2(0, 0));
    CHECK(taylor_is_exact(e1, xi2(0, 0)));
    CHECK(t.constant_term() == ComplexRational(Rational(1)));
    CHECK(t.coefficient({1, 0}).is_zero());
    CHECK(t.coefficient({0, 1}).is_zero());

    // the floating path agrees with the exact one
    PowerSeries tn = taylor_at(e1.to_numeric(), xi2(0, 0));
    CHECK_FALSE(taylor_is_exact(e1.to_numeric(), xi2(0, 0)));
    for (const auto& [beta, v] : t.terms())
        CHECK(std::abs(tn.coefficient(beta).to_complex() - v.to_complex()) <= 1e-15 * std::max(1.0, std::abs(v.to_complex())));
}

TEST_CASE("Gamma coefficients of the examples")
{
    SUBCASE("example 1 at 0")
    {
        PowerSeries g = gamma_series(load_fixture("example1"), xi2(0, 0));
        CHECK(g.coefficient({4, 0}) == cr(0, 1, -1, 64));
        CHECK(g.coefficient({0, 4}) == cr(0, 1, -1, 64));
        CHECK(g.coefficient({6, 0}) == cr(0, 1, 1, 384));
        CHECK(g.coefficient({8, 0}) == cr(-15, 8192, -1, 5120));
        CHECK(g.coefficient({4, 4}) == cr(1, 4096, 0, 1));
        CHECK(g.coefficient({2, 0}).is_zero());
        CHECK(g.constant_term().is_zero());
    }
    SUBCASE("example 2 at 0")
    {
        PowerSeries g = gamma_series(load_fixture("example2"), xi2(0, 0));
        CHECK(g.coefficient({2, 0}) == cr(0, 1, -1, 24));
        CHECK(g.coefficient({1, 2}) == cr(0, 1, 1, 96));
        CHECK(g.coefficient({0, 4}) == cr(0, 1, -1, 96));
        CHECK(g.coefficient({4, 0}) == cr(-23, 1152, 1, 288));
        CHECK(g.coefficient({3, 2}) == cr(-1, 2304, -1, 576));
        CHECK(g.coefficient({2, 4}) == cr(1, 2048, 0, 1));
        CHECK(g.coefficient({1, 6}) == cr(-1, 9216, 1, 34560));
        CHECK(g.coefficient({0, 8}) == cr(-23, 18432, -1, 7680));
    }
    SUBCASE("example 3 at 0 and (pi, pi)")
    {
        LatticeFunction e3 = load_fixture("example3");
        PowerSeries g = gamma_series(e3, xi2(0, 0));
        CHECK(g.coefficient({0, 2}) == cr(0, 1, -1, 8));
        CHECK(g.coefficient({6, 0}) == cr(0, 1, -1, 128));
        CHECK(g.coefficient({0, 4}) == cr(-3, 128, 1, 96));
        CHECK(g.coefficient({6, 2}) == cr(1, 1024, 0, 1));
        CHECK(g.coefficient({8, 0}) == cr(0, 1, 65, 512));
        CHECK(g.coefficient({12, 0}) == cr(-111, 32768, 1277, 12096));

        CHECK(taylor_at(e3, xi2(M_PI, M_PI)).constant_term() == cr(0, 1, -1, 1));
        PowerSeries gp = gamma_series(e3, xi2(M_PI, M_PI));
        CHECK(gp.coefficient({2, 0}) == cr(-3, 8, 3, 8));
        CHECK(gp.coefficient({0, 2}) == cr(-1, 8, 1, 4));
        CHECK(gp.coefficient({1, 0}).is_zero());
        CHECK(gp.coefficient({0, 1}).is_zero());
    }
}

TEST_CASE("decomposition into Q and R")
{
    SUBCASE("example 1 with m = (2,2), k = 2")
    {
        PowerSeries g = gamma_series(load_fixture("example1"), xi2(0, 0));
        PointClassification c = decompose(g, {2, 2}, Rational(2));
        CHECK(c.Q.coefficient({4, 0}) == Rational(1, 64));
        CHECK(c.Q.coefficient({0, 4}) == Rational(1, 64));
        CHECK(c.Q.terms().size() == 2);
        CHECK(c.R.coefficient({8, 0}) == Rational(15, 8192));
        CHECK(c.R.coefficient({0, 8}) == Rational(15, 8192));
        CHECK(c.R.coefficient({4, 4}) == Rational(-1, 4096));
        CHECK(c.drift == std::vector<Rational>{Rational(0), Rational(0)});
        CHECK(reassemble(c, 2, default_truncation_degree) == g);
    }
    SUBCASE("example 2 with m = (1,2), k = 2")
    {
        PowerSeries g = gamma_series(load_fixture("example2"), xi2(0, 0));
        PointClassification c = decompose(g, {1, 2}, Rational(2));
        CHECK(c.Q.coefficient({2, 0}) == Rational(1, 24));
        CHECK(c.Q.coefficient({1, 2}) == Rational(-1, 96));
        CHECK(c.Q.coefficient({0, 4}) == Rational(1, 96));
        CHECK(c.Q.terms().size() == 3);
        CHECK(reassemble(c, 2, default_truncation_degree) == g);
    }
    SUBCASE("example 3 at (pi, pi) with m = (1,1), k = 1")
    {
        PowerSeries g = gamma_series(load_fixture("example3"), xi2(M_PI, M_PI));
        PointClassification c = decompose(g, {1, 1}, Rational(1));
        CHECK(c.R.coefficient({2, 0}) == Rational(3, 8));
        CHECK(c.R.coefficient({0, 2}) == Rational(1, 8));
        CHECK(c.Q.coefficient({2, 0}) == Rational(-3, 8));
        CHECK(c.Q.coefficient({0, 2}) == Rational(-1, 4));
    }
    SUBCASE("errors")
    {
        PowerSeries g(2, 6);
        g.set({1, 0}, cr(1, 2, 0, 1));
        CHECK_THROWS(decompose(g, {1, 1}, Rational(1)));
        PowerSeries below = gamma_series(load_fixture("example2"), xi2(0, 0));
        CHECK_THROWS(decompose(below, {2, 2}, Rational(2)));
    }
}

TEST_CASE("weight inference")
{
    auto contains = [](const std::vector<WeightChoice>& v, std::vector<int> m, Rational k) {
        for (const auto& w : v)
            if (w.m == m && w.k == k)
                return true;
        return false;
    };
    CHECK(contains(infer_weights(gamma_series(load_fixture("example1"), xi2(0, 0))), {2, 2}, Rational(2)));
    CHECK(contains(infer_weights(gamma_series(load_fixture("example3"), xi2(M_PI, M_PI))), {1, 1}, Rational(1)));

    PowerSeries quad(2, 6);
    quad.set({2, 0}, cr(-1, 1, 0, 1));
    quad.set({0, 2}, cr(-1, 1, 0, 1));
    auto w = infer_weights(quad);
    REQUIRE_FALSE(w.empty());
    CHECK(contains(w, {1, 1}, Rational(1)));
    PointClassification c = classify(quad, {1, 1}, Rational(1), weighted_sphere_grid({1, 1}, 1000));
    CHECK(c.type == PointType::positive_homogeneous);
    CHECK(c.Q.empty());
    CHECK(c.mu == Rational(1));

    for (std::size_t i = 1; i < w.size(); ++i)
        CHECK(w[i - 1].mu >= w[i].mu);
}

TEST_CASE("weighted sphere grid")
{
    for (const auto& x : weighted_sphere_grid({2, 3}, 500))
        CHECK(std::pow(x(0), 4) + std::pow(x(1), 6) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification of the examples")
{
    PointClassification c1 = classify_point(load_fixture("example1"), xi2(0, 0));
    CHECK(c1.type == PointType::imaginary_homogeneous);
    CHECK(c1.m == std::vector<int>{2, 2});
    CHECK(c1.k == Rational(2));
    CHECK(c1.mu == Rational(1, 2));
    CHECK(c1.min_abs_Q > 0.0);

    PointClassification c2 = classify_point(load_fixture("example2"), xi2(0, 0));
    CHECK(c2.type == PointType::imaginary_homogeneous);
    CHECK(c2.m == std::vector<int>{1, 2});
    CHECK(c2.mu == Rational(3, 4));

    LatticeFunction e3 = load_fixture("example3");
    PointClassification a = classify_point(e3, xi2(0, 0));
    PointClassification b = classify_point(e3, xi2(M_PI, M_PI));
    CHECK(a.type == PointType::imaginary_homogeneous);
    CHECK(a.m == std::vector<int>{3, 1});
    CHECK(a.k == Rational(2));
    CHECK(a.mu == Rational(2, 3));
    CHECK(b.type == PointType::positive_homogeneous);
    CHECK(b.m == std::vector<int>{1, 1});
    CHECK(b.k == Rational(1));
    CHECK(b.mu == Rational(1));
    CHECK(mu_phi({a, b}) == Rational(2, 3));
    CHECK(mu_phi({c1}) == Rational(1, 2));
    CHECK_THROWS(mu_phi({}));

    std::ostringstream os;
    write_classification(os, c1);
    CHECK(os.str().find("type imaginary_homogeneous") != std::string::npos);
    CHECK(os.str().find("mu 1/2") != std::string::npos);
}

TEST_CASE("classification on the floating path")
{
    // same walk, values stored as doubles
    PointClassification c = classify_point(load_fixture("example1").to_numeric(), xi2(0, 0));
    CHECK(c.type == PointType::imaginary_homogeneous);
    CHECK(c.mu == Rational(1, 2));
}
