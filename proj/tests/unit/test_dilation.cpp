#include <doctest.h>

#include <cmath>
#include <random>

#include "aniso/dilation.hpp"

using namespace aniso;

namespace {

// Plain Taylor series in long double, 40 terms.
Matrix series_exp(const Matrix& a)
{
    const int d = static_cast<int>(a.rows());
    using LM = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    LM al = a.cast<long double>();
    LM term = LM::Identity(d, d), sum = LM::Identity(d, d);
    for (int k = 1; k < 40; ++k) {
        term = term * al / static_cast<long double>(k);
        sum += term;
    }
    return sum.cast<double>();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("mat_exp closed forms")
{
    CHECK(max_abs(mat_exp(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)) == 0.0);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    Matrix ed = mat_exp(d);
    CHECK(ed(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(ed(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
    CHECK(ed(0, 1) == 0.0);

    Matrix rot(2, 2);
    rot << 0.0, -M_PI / 2, M_PI / 2, 0.0;
    Matrix expected(2, 2);
    expected << 0.0, -1.0, 1.0, 0.0;
    CHECK(max_abs(mat_exp(rot) - expected) < 1e-14);
    CHECK(max_abs(mat_exp(rot) - series_exp(rot)) < 1e-14);

    Matrix nil(2, 2);
    nil << 0.0, 1.0, 0.0, 0.0;
    Matrix unip(2, 2);
    unip << 1.0, 1.0, 0.0, 1.0;
    CHECK(max_abs(mat_exp(nil) - unip) < 1e-15);
}

TEST_CASE("mat_exp matches the series oracle on random matrices")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + trial % 3;
        Matrix a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                a(i, j) = n01(rng);
        a *= 2.0 / a.norm();
        Matrix ref = series_exp(a);
        CHECK(max_abs(mat_exp(a) - ref) <= 1e-13 * std::max(1.0, max_abs(ref)));
    }
}

TEST_CASE("mat_exp rejects bad input")
{
    CHECK_THROWS_AS(mat_exp(Matrix::Zero(2, 3)), std::invalid_argument);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = NAN;
    CHECK_THROWS_AS(mat_exp(bad), std::invalid_argument);
    CHECK_THROWS_AS(Endomorphism::from_row_major(2, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("dilate examples")
{
    DilationGroup id(Endomorphism::identity(2));
    CHECK(max_abs(id.dilate(2.0) - 2.0 * Matrix::Identity(2, 2)) < 1e-15);

    DilationGroup g(Endomorphism::diagonal({0.5, 0.25}));
    Matrix m = g.dilate(16.0);
    CHECK(m(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(m(1, 1) == doctest::Approx(2.0).epsilon(1e-15));

    Matrix j(2, 2);
    j << 0.0, -1.0, 1.0, 0.0;
    DilationGroup rot{Endomorphism(j)};
    Matrix expected(2, 2);
    expected << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
    CHECK(max_abs(rot.dilate(std::exp(1.0)) - expected) < 1e-14);
    CHECK(max_abs(rot.dilate(std::exp(1.0)) - series_exp(j)) < 1e-14);

    CHECK(max_abs(g.dilate(1.0) - Matrix::Identity(2, 2)) < 1e-15);
    CHECK_THROWS_AS(g.dilate(0.0), std::invalid_argument);
    CHECK_THROWS_AS(g.dilate(-1.0), std::invalid_argument);
}

TEST_CASE("apply agrees with the dense matrix on every path")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    Matrix shear(2, 2);
    shear << 1.0, 5.0, 0.0, 1.0;
    Matrix spiral(2, 2);
    spiral << 0.5, -2.0, 2.0, 0.5;
    for (const Matrix& e : {Matrix(Matrix::Identity(2, 2) * 0.5), shear, spiral}) {
        DilationGroup g{Endomorphism(e)};
        for (int i = 0; i < 10; ++i) {
            Vector x(2);
            x << n01(rng), n01(rng);
            double r = std::exp(2.0 * n01(rng));
            Vector a = g.apply(r, x), b = g.dilate(r) * x;
            CHECK((a - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
        }
    }
}

TEST_CASE("contracting characterization")
{
    CHECK(is_contracting(Endomorphism::identity(2)).contracting());
    CHECK(is_contracting(Endomorphism::diagonal({1.0, -1.0})).status == ContractingStatus::not_contracting);
    Matrix shear(2, 2);
    shear << 1.0, 5.0, 0.0, 1.0;
    ContractingReport r = is_contracting(Endomorphism(shear));
    CHECK(r.contracting());
    CHECK(r.probe_norm <= 1e-3);
    // independent probe of |r^E| at r = 1e-6
    CHECK(Eigen::JacobiSVD<Matrix>(mat_exp(std::log(1e-6) * shear)).singularValues()(0) <= 1e-3);
    CHECK(is_contracting(Endomorphism::diagonal({0.0, 1.0})).status != ContractingStatus::contracting);
}

TEST_CASE("group laws")
{
    SUBCASE("diagonal closed forms")
    {
        GroupLawReport r = group_laws_report(Endomorphism::diagonal({0.5, 0.25}), {{2.0, 3.0}});
        CHECK(r.max() <= 1e-12);
        Matrix st = DilationGroup(Endomorphism::diagonal({0.5, 0.25})).dilate(6.0);
        CHECK(st(0, 0) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
        CHECK(st(1, 1) == doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-15));
    }
    SUBCASE("identity determinant")
    {
        GroupLawReport r = group_laws_report(Endomorphism::identity(3), {{2.0, 8.0}, {0.5, 4.0}});
        CHECK(r.determinant <= 1e-15);
    }
    SUBCASE("random symmetric E against an eigendecomposition oracle")
    {
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> n01;
        std::uniform_real_distribution<double> lt(std::log(0.01), std::log(100.0));
        for (int trial = 0; trial < 10; ++trial) {
            Matrix a(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    a(i, j) = n01(rng);
            Matrix e = 0.5 * (a + a.transpose());
            e *= 5.0 / e.norm();
            std::vector<std::pair<double, double>> st;
            for (int k = 0; k < 20; ++k)
                st.emplace_back(std::exp(lt(rng)), std::exp(lt(rng)));
            CHECK(group_laws_report(Endomorphism(e), st).max() <= 1e-9);

            Eigen::SelfAdjointEigenSolver<Matrix> es(e);
            const double t = st[0].second;
            Matrix oracle = es.eigenvectors() *
                            es.eigenvalues().unaryExpr([t](double l) { return std::pow(t, l); }).asDiagonal() *
                            es.eigenvectors().transpose();
            Matrix got = DilationGroup(Endomorphism(e)).dilate(t);
            CHECK(max_abs(got - oracle) <= 1e-11 * std::max(1.0, max_abs(oracle)));
        }
    }
}

TEST_CASE("property: r^E s^E = (rs)^E and det(t^E) = t^{tr E}")
{
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> lt(std::log(0.1), std::log(10.0));
    for (int trial = 0; trial < 30; ++trial) {
        Matrix e(2, 2);
        e << n01(rng), n01(rng), n01(rng), n01(rng);
        DilationGroup g{Endomorphism(e)};
        double s = std::exp(lt(rng)), t = std::exp(lt(rng));
        Matrix lhs = g.dilate(s * t), rhs = g.dilate(s) * g.dilate(t);
        CHECK(max_abs(lhs - rhs) <= 1e-11 * max_abs(g.dilate(s)) * max_abs(g.dilate(t)));
        CHECK(g.dilate(t).determinant() == doctest::Approx(std::pow(t, e.trace())).epsilon(1e-10));
    }
}

TEST_CASE("sphere_scale and capture_radius")
{
    DilationGroup id(Endomorphism::identity(2));
    Vector x(2);
    x << 3.0, 4.0;
    CHECK(sphere_scale(id, x) == doctest::Approx(5.0).epsilon(1e-10));
    DilationGroup g(Endomorphism::diagonal({0.5, 0.25}));
    double r = sphere_scale(g, x);
    CHECK(g.apply(1.0 / r, x).norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(sphere_scale(g, Vector::Zero(2)), std::invalid_argument);
    double cap = capture_radius(g);
    CHECK(cap >= 1.0);
    CHECK(g.apply(1.0 / cap, Vector::Ones(2)).norm() <= 1.0 + 1e-12);
}
