#include "aniso/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aniso {

Endomorphism::Endomorphism(Matrix entries) : m_(std::move(entries))
{
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw std::invalid_argument("endomorphism must be a non-empty square matrix");
    if (!m_.allFinite())
        throw std::invalid_argument("endomorphism has non-finite entries");
    trace_ = m_.trace();
    Matrix off = m_;
    off.diagonal().setZero();
    diagonal_ = off.isZero(0.0);

    Eigen::EigenSolver<Matrix> es(m_, false);
    eigen_ok_ = es.info() == Eigen::Success;
    if (eigen_ok_) {
        auto ev = es.eigenvalues();
        eig_.assign(ev.data(), ev.data() + ev.size());
    }
}

Endomorphism Endomorphism::identity(int dim, double scale)
{
    return Endomorphism(scale * Matrix::Identity(dim, dim));
}

Endomorphism Endomorphism::diagonal(const std::vector<double>& diag)
{
    Matrix m = Matrix::Zero(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        m(i, i) = diag[i];
    return Endomorphism(m);
}

Endomorphism Endomorphism::from_row_major(int dim, const std::vector<double>& entries)
{
    if (dim <= 0 || entries.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("row-major endomorphism needs d*d entries");
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = entries[i * dim + j];
    return Endomorphism(m);
}

const std::vector<std::complex<double>>& Endomorphism::eigenvalues() const
{
    if (!eigen_ok_)
        throw std::runtime_error("eigenvalue solver failed");
    return eig_;
}

double Endomorphism::eigen_residual() const
{
    const int d = dim();
    double scale = std::max(1.0, std::pow(m_.norm(), d));
    double worst = 0.0;
    for (auto lam : eigenvalues()) {
        Eigen::MatrixXcd shifted = m_.cast<std::complex<double>>();
        shifted.diagonal().array() -= lam;
        worst = std::max(worst, std::abs(shifted.partialPivLu().determinant()) / scale);
    }
    return worst;
}

Matrix mat_exp(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("mat_exp: matrix is not square");
    if (!a.allFinite())
        throw std::invalid_argument("mat_exp: non-finite entries");
    const Eigen::Index d = a.rows();
    double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    Matrix b = a / std::ldexp(1.0, squarings);

    const int degree = 18;
    Matrix result = Matrix::Identity(d, d);
    for (int k = degree; k >= 1; --k)
        result = Matrix::Identity(d, d) + (b * result) / static_cast<double>(k);
    for (int i = 0; i < squarings; ++i)
        result = result * result;
    return result;
}

DilationGroup::DilationGroup(Endomorphism generator) : e_(std::move(generator))
{
    if (e_.is_diagonal()) {
        diag_path_ = true;
        diag_ = e_.matrix().diagonal();
        return;
    }
    Eigen::EigenSolver<Matrix> es(e_.matrix(), true);
    if (es.info() != Eigen::Success)
        return;
    Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    auto sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e6)
        return;
    v_ = v;
    vinv_ = v.inverse();
    lambda_ = es.eigenvalues();
    eigen_path_ = true;
    for (double r : {1e-3, 0.5, 7.0, 1e3}) {
        Matrix ref = mat_exp(std::log(r) * e_.matrix());
        Matrix fast = dilate(r);
        if ((ref - fast).norm() > 1e-12 * std::max(1.0, ref.norm())) {
            eigen_path_ = false;
            return;
        }
    }
}

Matrix DilationGroup::dilate(double r) const
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("dilate: r must be positive and finite");
    const double lr = std::log(r);
    if (diag_path_) {
        Matrix m = Matrix::Zero(dim(), dim());
        for (int i = 0; i < dim(); ++i)
            m(i, i) = std::exp(lr * diag_(i));
        return m;
    }
    if (eigen_path_) {
        Eigen::VectorXcd p = (lr * lambda_).array().exp();
        return (v_ * p.asDiagonal() * vinv_).real();
    }
    return mat_exp(lr * e_.matrix());
}

Vector DilationGroup::apply(double r, const Vector& x) const
{
    if (diag_path_) {
        if (!(r > 0.0))
            throw std::invalid_argument("dilate: r must be positive");
        const double lr = std::log(r);
        Vector y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            y(i) = std::exp(lr * diag_(i)) * x(i);
        return y;
    }
    if (eigen_path_) {
        if (!(r > 0.0))
            throw std::invalid_argument("dilate: r must be positive");
        Eigen::VectorXcd p = (std::log(r) * lambda_).array().exp();
        Eigen::VectorXcd c = vinv_ * x.cast<std::complex<double>>();
        return (v_ * (p.array() * c.array()).matrix()).real();
    }
    return dilate(r) * x;
}

Matrix dilate(const DilationGroup& g, double r) { return g.dilate(r); }

ContractingReport is_contracting(const Endomorphism& e)
{
    ContractingReport rep;
    if (!e.eigen_ok()) {
        rep.status = ContractingStatus::indeterminate;
        rep.message = "eigenvalue solver failed";
        return rep;
    }
    double mn = std::numeric_limits<double>::infinity();
    for (auto lam : e.eigenvalues())
        mn = std::min(mn, lam.real());
    rep.min_real_part = mn;
    rep.status = mn > 1e-10 ? ContractingStatus::contracting : ContractingStatus::not_contracting;

    Matrix t = mat_exp(std::log(1e-6) * e.matrix());
    const int d = e.dim();
    double probe = 0.0;
    if (d == 1) {
        probe = std::abs(t(0, 0));
    } else {
        // unit vectors on a coarse grid of directions
        const int n = 64;
        for (int k = 0; k < n * (d - 1); ++k) {
            Vector eta = Vector::Zero(d);
            double a = 2.0 * M_PI * k / n;
            int i = k % (d - 1);
            eta(i) = std::cos(a);
            eta(i + 1) = std::sin(a);
            probe = std::max(probe, (t * eta).norm());
        }
        for (int i = 0; i < d; ++i)
            probe = std::max(probe, t.col(i).norm());
    }
    rep.probe_norm = probe;
    rep.message = rep.contracting() ? "all eigenvalues have positive real part"
                                    : "an eigenvalue has non-positive real part";
    return rep;
}

double GroupLawReport::max() const
{
    return std::max({identity, product, inverse, determinant});
}

GroupLawReport group_laws_report(const Endomorphism& e,
                                 const std::vector<std::pair<double, double>>& samples)
{
    DilationGroup g(e);
    GroupLawReport rep;
    const int d = e.dim();
    rep.identity = (g.dilate(1.0) - Matrix::Identity(d, d)).norm();
    for (auto [s, t] : samples) {
        Matrix ms = g.dilate(s), mt = g.dilate(t), mst = g.dilate(s * t);
        rep.product = std::max(rep.product, (mst - ms * mt).norm() / (ms.norm() * mt.norm()));

        Matrix minv = g.dilate(1.0 / t);
        rep.inverse = std::max(rep.inverse,
                               (mt * minv - Matrix::Identity(d, d)).norm() / (mt.norm() * minv.norm()));

        double hadamard = 1.0;
        for (int i = 0; i < d; ++i)
            hadamard *= mt.col(i).norm();
        double expected = std::pow(t, e.trace());
        rep.determinant = std::max(rep.determinant,
                                   std::abs(mt.determinant() - expected) / std::max(hadamard, expected));
    }
    return rep;
}

double sphere_scale(const DilationGroup& g, const Vector& x)
{
    if (x.norm() == 0.0)
        throw std::invalid_argument("sphere_scale: x must be non-zero");
    auto f = [&](double lr) { return g.apply(std::exp(-lr), x).norm(); };
    double lo = 0.0, hi = 0.0;
    int guard = 0;
    while (f(lo) < 1.0) {
        lo -= 1.0;
        if (++guard > 2000)
            throw std::runtime_error("sphere_scale: no lower bracket");
    }
    guard = 0;
    while (f(hi) > 1.0) {
        hi += 1.0;
        if (++guard > 2000)
            throw std::runtime_error("sphere_scale: no upper bracket");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double capture_radius(const DilationGroup& g, int grid_per_axis)
{
    const int d = g.dim();
    std::vector<Vector> pts;
    std::vector<int> idx(d, 0);
    while (true) {
        Vector x(d);
        for (int i = 0; i < d; ++i)
            x(i) = -1.0 + 2.0 * idx[i] / (grid_per_axis - 1);
        pts.push_back(x);
        int i = 0;
        while (i < d && ++idx[i] == grid_per_axis)
            idx[i++] = 0;
        if (i == d)
            break;
    }
    double r = 1.0;
    for (int k = 0; k <= 60; ++k, r *= 2.0) {
        Matrix inv = g.dilate(1.0 / r);
        bool all_in = std::all_of(pts.begin(), pts.end(),
                                  [&](const Vector& x) { return (inv * x).norm() <= 1.0; });
        if (all_in)
            return r;
    }
    throw std::runtime_error("capture_radius: no capture within 2^60");
}

}  // namespace aniso
