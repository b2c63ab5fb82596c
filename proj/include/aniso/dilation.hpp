#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aniso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Real d x d matrix generating the group r^E.
class Endomorphism {
public:
    explicit Endomorphism(Matrix entries);

    static Endomorphism identity(int dim, double scale = 1.0);
    static Endomorphism diagonal(const std::vector<double>& diag);
    // Row-major entries, d*d of them.
    static Endomorphism from_row_major(int dim, const std::vector<double>& entries);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double trace() const { return trace_; }
    bool is_diagonal() const { return diagonal_; }

    // Throws std::runtime_error when the eigen solver fails.
    const std::vector<std::complex<double>>& eigenvalues() const;
    bool eigen_ok() const { return eigen_ok_; }
    // max_i |det(E - lambda_i I)| / max(1, |E|^d)
    double eigen_residual() const;

    Endomorphism transpose() const { return Endomorphism(m_.transpose()); }
    Endomorphism scaled(double s) const { return Endomorphism(s * m_); }
    Endomorphism operator+(const Endomorphism& o) const { return Endomorphism(m_ + o.m_); }

private:
    Matrix m_;
    double trace_ = 0.0;
    bool diagonal_ = false;
    bool eigen_ok_ = false;
    std::vector<std::complex<double>> eig_;
};

// exp(A) by scaling and squaring around a degree-18 Taylor core.
Matrix mat_exp(const Matrix& a);

class DilationGroup {
public:
    explicit DilationGroup(Endomorphism generator);

    const Endomorphism& generator() const { return e_; }
    int dim() const { return e_.dim(); }

    // r^E = exp(ln r E); r must be positive.
    Matrix dilate(double r) const;
    // r^E x, using the diagonal or eigenbasis fast path when available.
    Vector apply(double r, const Vector& x) const;

private:
    Endomorphism e_;
    bool diag_path_ = false;
    bool eigen_path_ = false;
    Eigen::VectorXd diag_;
    Eigen::MatrixXcd v_, vinv_;
    Eigen::VectorXcd lambda_;
};

Matrix dilate(const DilationGroup& g, double r);

enum class ContractingStatus { contracting, not_contracting, indeterminate };

struct ContractingReport {
    ContractingStatus status = ContractingStatus::indeterminate;
    double min_real_part = 0.0;
    double probe_norm = 0.0;  // max |r^E eta| over unit vectors at r = 1e-6
    std::string message;

    bool contracting() const { return status == ContractingStatus::contracting; }
};

ContractingReport is_contracting(const Endomorphism& e);

struct GroupLawReport {
    double identity = 0.0;
    double product = 0.0;
    double inverse = 0.0;
    double determinant = 0.0;

    double max() const;
};

// Residuals are measured against the natural rounding scale of each
// identity: |s^E| |t^E| for products, |t^E| |t^-E| for inverses and the
// Hadamard bound prod |col_i(t^E)| for determinants.
GroupLawReport group_laws_report(const Endomorphism& e,
                                 const std::vector<std::pair<double, double>>& samples);

// r > 0 with |r^{-E} x| = 1, by bisection on log r.
double sphere_scale(const DilationGroup& g, const Vector& x);

// Smallest r = 2^k such that every sampled point of [-1,1]^d lies in r^E(unit ball).
double capture_radius(const DilationGroup& g, int grid_per_axis = 9);

}  // namespace aniso
