#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aniso/rational.hpp"

namespace aniso {

using LatticePoint = std::vector<int>;
using Complex = std::complex<double>;

// Finitely supported function Z^d -> C. Exact functions carry complex
// rational values alongside their double images.
class LatticeFunction {
public:
    explicit LatticeFunction(int dim = 1);

    static LatticeFunction exact(int dim, const std::map<LatticePoint, ComplexRational>& values);
    static LatticeFunction numeric(int dim, const std::map<LatticePoint, Complex>& values);
    static LatticeFunction delta(int dim);

    // Lines "x1 ... xd  re  im" with rational or decimal values; '#' starts a comment.
    static LatticeFunction parse(std::istream& in);
    static LatticeFunction from_file(const std::string& path);
    void write(std::ostream& out) const;

    int dim() const { return dim_; }
    bool is_exact() const { return exact_; }
    std::size_t size() const { return values_.size(); }
    const std::map<LatticePoint, Complex>& values() const { return values_; }
    const std::map<LatticePoint, ComplexRational>& exact_values() const;

    Complex operator()(const LatticePoint& x) const;
    ComplexRational exact_at(const LatticePoint& x) const;

    double l1_norm() const;
    Complex sum() const;
    ComplexRational exact_sum() const;

    // componentwise min / max over the support (zeros for the zero function)
    LatticePoint lower() const;
    LatticePoint upper() const;
    std::vector<int> extent() const;
    int diameter() const;

    LatticeFunction to_numeric() const;

private:
    int dim_;
    bool exact_ = false;
    std::map<LatticePoint, Complex> values_;
    std::map<LatticePoint, ComplexRational> exact_values_;
};

LatticeFunction convolve(const LatticeFunction& a, const LatticeFunction& b);

enum class PowerMethod { direct, fft };

struct FftOptions {
    std::vector<int> grid;             // per axis; empty = next power of two >= n*extent+1
    bool allow_truncation = false;     // accept a grid smaller than n*extent+1
    std::size_t memory_guard = std::size_t(1) << 24;  // max grid cells
};

// phi^(n) on the discrete torus of the FFT grid. Powers are formed
// pointwise from one transform of phi, so several n can share the setup.
class FftPowers {
public:
    FftPowers(const LatticeFunction& phi, int n_max, const FftOptions& opt = {});

    const std::vector<int>& grid() const { return grid_; }
    // true when grid < n_max*extent+1 on some axis (values then alias)
    bool truncated() const { return truncated_; }

    // phi^(n)(x) for x in the box [lo, hi], row-major with the last axis fastest.
    std::vector<Complex> on_box(int n, const LatticePoint& lo, const LatticePoint& hi) const;
    // phi^(n) over its full support box; requires an untruncated grid
    LatticeFunction power(int n) const;

private:
    int dim_;
    int n_max_;
    LatticePoint lower_;
    std::vector<int> extent_;
    std::vector<int> grid_;
    bool truncated_ = false;
    std::vector<Complex> spectrum_;

    std::vector<Complex> inverse_power(int n) const;
};

// phi^(n). direct: exact for exact phi, else dense double convolution.
LatticeFunction conv_power(const LatticeFunction& phi, int n, PowerMethod method = PowerMethod::direct,
                           const FftOptions& opt = {});

// Dense direct powers in double precision, calling visit(k, values on the
// k-th support box) for k = 1..n_max. Box of phi^(k) is [k*lower, k*upper].
void direct_powers_numeric(const LatticeFunction& phi, int n_max,
                           const std::function<void(int, const LatticePoint& lo, const std::vector<int>& shape,
                                                    const std::vector<Complex>& values)>& visit);

// phi_hat(xi) = sum_x phi(x) e^{i x.xi} with derivatives, by compensated summation.
class TrigPolynomial {
public:
    explicit TrigPolynomial(const LatticeFunction& phi);

    int dim() const { return dim_; }
    Complex operator()(const Eigen::VectorXd& xi) const;
    // value, gradient and Hessian of phi_hat at xi
    void derivatives(const Eigen::VectorXd& xi, Complex& value, Eigen::VectorXcd& grad, Eigen::MatrixXcd& hess) const;
    // |phi_hat|^2 with gradient and Hessian
    double modulus2(const Eigen::VectorXd& xi, Eigen::VectorXd* grad = nullptr, Eigen::MatrixXd* hess = nullptr) const;

private:
    int dim_;
    std::vector<Eigen::VectorXd> points_;
    std::vector<Complex> coeffs_;
};

Complex fourier_eval(const LatticeFunction& phi, const Eigen::VectorXd& xi);

// Representative of xi in (-pi, pi]^d.
Eigen::VectorXd wrap_torus(const Eigen::VectorXd& xi);
// Euclidean distance on the flat torus R^d / 2 pi Z^d.
double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct MaxModulusPoint {
    Eigen::VectorXd xi;
    double residual = 0.0;  // |1 - |phi_hat(xi)||
};

struct MaxModulusSet {
    std::vector<MaxModulusPoint> points;
    // T_phi = xi_shift + (-pi, pi]^d contains every point in its interior
    Eigen::VectorXd torus_shift;
    double sup_modulus = 0.0;
};

struct OmegaOptions {
    int grid_per_axis = 128;
    double refine_tol = 1e-14;
    double merge_tol = 1e-6;
    double candidate_floor = 0.99;
};

// Points where |phi_hat| = 1. Throws when sup |phi_hat| > 1 + 1e-9, when the
// maximum set is not finite (ridges or |phi_hat| = 1 on much of the torus),
// or when no maximum at modulus 1 is found.
MaxModulusSet find_omega(const LatticeFunction& phi, const OmegaOptions& opt = {});

struct InversionReport {
    std::vector<LatticePoint> points;
    std::vector<Complex> quadrature;
    std::vector<Complex> direct;
    std::vector<int> nodes;
    double max_residual = 0.0;
    bool pass = false;
};

// (2 pi)^-d int_T phi_hat^n e^{-i x.xi} by the tensor trapezoid rule, against
// the direct power. Each axis gets enough nodes to span supp phi^(n) and every x.
InversionReport inversion_check(const LatticeFunction& phi, int n, const std::vector<LatticePoint>& x_list,
                                const std::vector<int>& quad_nodes = {});

}  // namespace aniso
