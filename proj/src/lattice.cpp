#include "aniso/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

#include "aniso/sampling.hpp"

namespace aniso {

LatticeFunction::LatticeFunction(int dim) : dim_(dim)
{
    if (dim < 1)
        throw std::invalid_argument("LatticeFunction: dimension must be positive");
}

namespace {

void check_point(int dim, const LatticePoint& x)
{
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("LatticeFunction: point has wrong dimension");
}

}  // namespace

LatticeFunction LatticeFunction::exact(int dim, const std::map<LatticePoint, ComplexRational>& values)
{
    LatticeFunction f(dim);
    f.exact_ = true;
    for (const auto& [x, v] : values) {
        check_point(dim, x);
        if (v.is_zero())
            continue;
        f.exact_values_.emplace(x, v);
        f.values_.emplace(x, v.to_complex());
    }
    return f;
}

LatticeFunction LatticeFunction::numeric(int dim, const std::map<LatticePoint, Complex>& values)
{
    LatticeFunction f(dim);
    for (const auto& [x, v] : values) {
        check_point(dim, x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("LatticeFunction: non-finite value");
        if (v != Complex(0.0))
            f.values_.emplace(x, v);
    }
    return f;
}

LatticeFunction LatticeFunction::delta(int dim)
{
    return exact(dim, {{LatticePoint(dim, 0), ComplexRational(1)}});
}

LatticeFunction LatticeFunction::parse(std::istream& in)
{
    std::map<LatticePoint, ComplexRational> values;
    int dim = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = line.substr(0, line.find('#'));
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        int d = static_cast<int>(tok.size()) - 2;
        if (d < 1)
            throw std::invalid_argument("lattice file line " + std::to_string(lineno) + ": too few fields");
        if (dim == 0)
            dim = d;
        else if (d != dim)
            throw std::invalid_argument("lattice file line " + std::to_string(lineno) + ": inconsistent dimension");
        LatticePoint x(dim);
        for (int j = 0; j < dim; ++j) {
            std::size_t used = 0;
            x[j] = std::stoi(tok[j], &used);
            if (used != tok[j].size())
                throw std::invalid_argument("lattice file line " + std::to_string(lineno) + ": bad coordinate");
        }
        ComplexRational v(parse_rational(tok[dim]), parse_rational(tok[dim + 1]));
        if (!values.emplace(x, v).second)
            throw std::invalid_argument("lattice file line " + std::to_string(lineno) + ": duplicate point");
    }
    if (dim == 0)
        throw std::invalid_argument("lattice file: no entries");
    return exact(dim, values);
}

LatticeFunction LatticeFunction::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open lattice file: " + path);
    return parse(in);
}

void LatticeFunction::write(std::ostream& out) const
{
    if (exact_) {
        for (const auto& [x, v] : exact_values_) {
            for (int c : x)
                out << c << ' ';
            out << ' ' << to_string(v.re) << "  " << to_string(v.im) << '\n';
        }
        return;
    }
    out.precision(17);
    for (const auto& [x, v] : values_) {
        for (int c : x)
            out << c << ' ';
        out << ' ' << v.real() << "  " << v.imag() << '\n';
    }
}

const std::map<LatticePoint, ComplexRational>& LatticeFunction::exact_values() const
{
    if (!exact_)
        throw std::logic_error("LatticeFunction: values are not exact");
    return exact_values_;
}

Complex LatticeFunction::operator()(const LatticePoint& x) const
{
    auto it = values_.find(x);
    return it == values_.end() ? Complex(0.0) : it->second;
}

ComplexRational LatticeFunction::exact_at(const LatticePoint& x) const
{
    const auto& m = exact_values();
    auto it = m.find(x);
    return it == m.end() ? ComplexRational(0) : it->second;
}

double LatticeFunction::l1_norm() const
{
    double s = 0.0;
    for (const auto& [x, v] : values_)
        s += std::abs(v);
    return s;
}

Complex LatticeFunction::sum() const
{
    Complex s = 0.0;
    for (const auto& [x, v] : values_)
        s += v;
    return s;
}

ComplexRational LatticeFunction::exact_sum() const
{
    ComplexRational s;
    for (const auto& [x, v] : exact_values())
        s += v;
    return s;
}

LatticePoint LatticeFunction::lower() const
{
    if (values_.empty())
        return LatticePoint(dim_, 0);
    LatticePoint lo = values_.begin()->first;
    for (const auto& [x, v] : values_)
        for (int j = 0; j < dim_; ++j)
            lo[j] = std::min(lo[j], x[j]);
    return lo;
}

LatticePoint LatticeFunction::upper() const
{
    if (values_.empty())
        return LatticePoint(dim_, 0);
    LatticePoint hi = values_.begin()->first;
    for (const auto& [x, v] : values_)
        for (int j = 0; j < dim_; ++j)
            hi[j] = std::max(hi[j], x[j]);
    return hi;
}

std::vector<int> LatticeFunction::extent() const
{
    LatticePoint lo = lower(), hi = upper();
    std::vector<int> e(dim_);
    for (int j = 0; j < dim_; ++j)
        e[j] = hi[j] - lo[j];
    return e;
}

int LatticeFunction::diameter() const
{
    auto e = extent();
    return *std::max_element(e.begin(), e.end());
}

LatticeFunction LatticeFunction::to_numeric() const
{
    LatticeFunction f(dim_);
    f.values_ = values_;
    return f;
}

namespace {

// Row-major box [lo, lo + shape - 1].
struct DenseBox {
    LatticePoint lo;
    std::vector<int> shape;

    std::size_t cells() const
    {
        std::size_t c = 1;
        for (int s : shape)
            c *= static_cast<std::size_t>(s);
        return c;
    }
    std::vector<std::size_t> strides() const
    {
        std::vector<std::size_t> st(shape.size(), 1);
        for (int j = static_cast<int>(shape.size()) - 2; j >= 0; --j)
            st[j] = st[j + 1] * shape[j + 1];
        return st;
    }
    std::size_t index(const LatticePoint& x) const
    {
        auto st = strides();
        std::size_t k = 0;
        for (std::size_t j = 0; j < shape.size(); ++j)
            k += static_cast<std::size_t>(x[j] - lo[j]) * st[j];
        return k;
    }
    LatticePoint point(std::size_t k) const
    {
        LatticePoint x(shape.size());
        for (int j = static_cast<int>(shape.size()) - 1; j >= 0; --j) {
            x[j] = lo[j] + static_cast<int>(k % shape[j]);
            k /= shape[j];
        }
        return x;
    }
};

template <class T>
struct Term {
    LatticePoint x;
    T value;
};

// (a * terms) with a dense on `box`; returns the dense product on the grown box.
template <class T, class MulAdd>
std::vector<T> dense_times_sparse(const std::vector<T>& a, const DenseBox& box, const std::vector<Term<T>>& terms,
                                  const LatticePoint& tlo, const std::vector<int>& text, DenseBox& out_box,
                                  MulAdd mul_add, const T& zero)
{
    const std::size_t d = box.shape.size();
    out_box.lo.resize(d);
    out_box.shape.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        out_box.lo[j] = box.lo[j] + tlo[j];
        out_box.shape[j] = box.shape[j] + text[j];
    }
    const auto ost = out_box.strides();
    std::vector<std::size_t> base(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::size_t rem = k, idx = 0;
        for (int j = static_cast<int>(d) - 1; j >= 0; --j) {
            idx += (rem % box.shape[j]) * ost[j];
            rem /= box.shape[j];
        }
        base[k] = idx;
    }
    std::vector<T> out(out_box.cells(), zero);
    for (const auto& t : terms) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < d; ++j)
            off += static_cast<std::size_t>(t.x[j] - tlo[j]) * ost[j];
        for (std::size_t k = 0; k < a.size(); ++k)
            mul_add(out[base[k] + off], a[k], t.value);
    }
    return out;
}

struct GaussInt {
    BigInt re;
    BigInt im;
};

void gauss_mul_add(GaussInt& acc, const GaussInt& a, const GaussInt& b)
{
    if (a.re == 0 && a.im == 0)
        return;
    if (b.im == 0) {
        acc.re += a.re * b.re;
        acc.im += a.im * b.re;
    } else if (b.re == 0) {
        acc.re -= a.im * b.im;
        acc.im += a.re * b.im;
    } else {
        acc.re += a.re * b.re - a.im * b.im;
        acc.im += a.re * b.im + a.im * b.re;
    }
}

BigInt lcm_denominators(const LatticeFunction& f)
{
    BigInt l = 1;
    for (const auto& [x, v] : f.exact_values()) {
        l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(v.re)));
        l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(v.im)));
    }
    return l;
}

LatticeFunction power_exact(const LatticeFunction& phi, int n)
{
    const int d = phi.dim();
    const BigInt den = lcm_denominators(phi);
    std::vector<Term<GaussInt>> terms;
    for (const auto& [x, v] : phi.exact_values()) {
        Rational re = v.re * Rational(den), im = v.im * Rational(den);
        terms.push_back({x, {boost::multiprecision::numerator(re), boost::multiprecision::numerator(im)}});
    }
    const LatticePoint lo = phi.lower();
    const std::vector<int> ext = phi.extent();
    DenseBox box{lo, std::vector<int>(d)};
    for (int j = 0; j < d; ++j)
        box.shape[j] = ext[j] + 1;
    std::vector<GaussInt> cur(box.cells(), GaussInt{0, 0});
    for (const auto& t : terms)
        cur[box.index(t.x)] = t.value;
    for (int k = 2; k <= n; ++k) {
        DenseBox next;
        cur = dense_times_sparse(cur, box, terms, lo, ext, next, gauss_mul_add, GaussInt{0, 0});
        box = next;
    }
    const BigInt scale = boost::multiprecision::pow(den, static_cast<unsigned>(n));
    std::map<LatticePoint, ComplexRational> out;
    for (std::size_t k = 0; k < cur.size(); ++k) {
        if (cur[k].re == 0 && cur[k].im == 0)
            continue;
        out.emplace(box.point(k), ComplexRational(Rational(cur[k].re, scale), Rational(cur[k].im, scale)));
    }
    return LatticeFunction::exact(d, out);
}

LatticeFunction sparse_convolve_exact(const LatticeFunction& a, const LatticeFunction& b)
{
    std::map<LatticePoint, ComplexRational> out;
    for (const auto& [x, u] : a.exact_values())
        for (const auto& [y, v] : b.exact_values()) {
            LatticePoint z(x.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                z[j] = x[j] + y[j];
            out[z] += u * v;
        }
    return LatticeFunction::exact(a.dim(), out);
}

Complex ipow(Complex z, int n)
{
    Complex r = 1.0;
    while (n > 0) {
        if (n & 1)
            r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

int next_pow2(long v)
{
    int p = 1;
    while (p < v)
        p *= 2;
    return p;
}

int floor_mod(long a, int m)
{
    long r = a % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

void fft_inplace(std::vector<Complex>& data, const std::vector<int>& grid, int sign)
{
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(grid.size()), grid.data(), reinterpret_cast<fftw_complex*>(data.data()),
                             reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
    }
    if (!plan)
        throw std::runtime_error("FFTW planning failed");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

LatticeFunction convolve(const LatticeFunction& a, const LatticeFunction& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("convolve: dimension mismatch");
    if (a.is_exact() && b.is_exact())
        return sparse_convolve_exact(a, b);
    std::map<LatticePoint, Complex> out;
    for (const auto& [x, u] : a.values())
        for (const auto& [y, v] : b.values()) {
            LatticePoint z(x.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                z[j] = x[j] + y[j];
            out[z] += u * v;
        }
    return LatticeFunction::numeric(a.dim(), out);
}

void direct_powers_numeric(const LatticeFunction& phi, int n_max,
                           const std::function<void(int, const LatticePoint&, const std::vector<int>&,
                                                    const std::vector<Complex>&)>& visit)
{
    if (n_max < 1)
        throw std::invalid_argument("direct_powers_numeric: n must be positive");
    const int d = phi.dim();
    std::vector<Term<Complex>> terms;
    for (const auto& [x, v] : phi.values())
        terms.push_back({x, v});
    const LatticePoint lo = phi.lower();
    const std::vector<int> ext = phi.extent();
    DenseBox box{lo, std::vector<int>(d)};
    for (int j = 0; j < d; ++j)
        box.shape[j] = ext[j] + 1;
    std::vector<Complex> cur(box.cells(), 0.0);
    for (const auto& t : terms)
        cur[box.index(t.x)] = t.value;
    visit(1, box.lo, box.shape, cur);
    auto mul_add = [](Complex& acc, const Complex& a, const Complex& b) { acc += a * b; };
    for (int k = 2; k <= n_max; ++k) {
        DenseBox next;
        cur = dense_times_sparse(cur, box, terms, lo, ext, next, mul_add, Complex(0.0));
        box = next;
        visit(k, box.lo, box.shape, cur);
    }
}

FftPowers::FftPowers(const LatticeFunction& phi, int n_max, const FftOptions& opt)
    : dim_(phi.dim()), n_max_(n_max), lower_(phi.lower()), extent_(phi.extent())
{
    if (n_max < 1)
        throw std::invalid_argument("FftPowers: n must be positive");
    std::vector<long> needed(dim_);
    for (int j = 0; j < dim_; ++j)
        needed[j] = static_cast<long>(n_max) * extent_[j] + 1;
    auto cells = [](const std::vector<int>& g) {
        std::size_t c = 1;
        for (int v : g)
            c *= static_cast<std::size_t>(v);
        return c;
    };
    if (!opt.grid.empty()) {
        if (static_cast<int>(opt.grid.size()) != dim_)
            throw std::invalid_argument("FftPowers: grid has wrong dimension");
        grid_ = opt.grid;
        for (int g : grid_)
            if (g < 1)
                throw std::invalid_argument("FftPowers: grid sizes must be positive");
        if (cells(grid_) > opt.memory_guard)
            throw std::length_error("FftPowers: grid exceeds the memory guard");
    } else {
        grid_.resize(dim_);
        for (int j = 0; j < dim_; ++j)
            grid_[j] = next_pow2(needed[j]);
        if (cells(grid_) > opt.memory_guard) {
            if (!opt.allow_truncation)
                throw std::length_error("FftPowers: grid for n*extent+1 exceeds the memory guard; "
                                        "allow truncation to use a windowed grid");
            while (cells(grid_) >= opt.memory_guard) {
                auto it = std::max_element(grid_.begin(), grid_.end());
                *it /= 2;
            }
        }
    }
    for (int j = 0; j < dim_; ++j)
        truncated_ = truncated_ || grid_[j] < needed[j];
    if (truncated_ && !opt.allow_truncation)
        throw std::length_error("FftPowers: grid smaller than n*extent+1 without truncation acknowledgement");

    DenseBox g{LatticePoint(dim_, 0), grid_};
    spectrum_.assign(g.cells(), 0.0);
    for (const auto& [x, v] : phi.values()) {
        LatticePoint y(dim_);
        for (int j = 0; j < dim_; ++j)
            y[j] = x[j] - lower_[j];
        spectrum_[g.index(y)] += v;
    }
    fft_inplace(spectrum_, grid_, FFTW_FORWARD);
}

std::vector<Complex> FftPowers::inverse_power(int n) const
{
    if (n < 1 || n > n_max_)
        throw std::invalid_argument("FftPowers: n outside [1, n_max]");
    std::vector<Complex> buf(spectrum_.size());
    std::transform(spectrum_.begin(), spectrum_.end(), buf.begin(), [n](Complex z) { return ipow(z, n); });
    fft_inplace(buf, grid_, FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(buf.size());
    for (auto& z : buf)
        z *= inv;
    return buf;
}

std::vector<Complex> FftPowers::on_box(int n, const LatticePoint& lo, const LatticePoint& hi) const
{
    if (static_cast<int>(lo.size()) != dim_ || static_cast<int>(hi.size()) != dim_)
        throw std::invalid_argument("FftPowers::on_box: box has wrong dimension");
    std::vector<Complex> buf = inverse_power(n);
    DenseBox g{LatticePoint(dim_, 0), grid_};
    DenseBox want{lo, std::vector<int>(dim_)};
    for (int j = 0; j < dim_; ++j) {
        if (hi[j] < lo[j])
            throw std::invalid_argument("FftPowers::on_box: empty box");
        want.shape[j] = hi[j] - lo[j] + 1;
    }
    std::vector<Complex> out(want.cells());
    LatticePoint y(dim_);
    for (std::size_t k = 0; k < out.size(); ++k) {
        LatticePoint x = want.point(k);
        for (int j = 0; j < dim_; ++j)
            y[j] = floor_mod(static_cast<long>(x[j]) - static_cast<long>(n) * lower_[j], grid_[j]);
        out[k] = buf[g.index(y)];
    }
    return out;
}

LatticeFunction FftPowers::power(int n) const
{
    for (int j = 0; j < dim_; ++j)
        if (static_cast<long>(grid_[j]) < static_cast<long>(n) * extent_[j] + 1)
            throw std::length_error("FftPowers::power: grid too small for the full support");
    LatticePoint lo(dim_), hi(dim_);
    for (int j = 0; j < dim_; ++j) {
        lo[j] = n * lower_[j];
        hi[j] = lo[j] + n * extent_[j];
    }
    auto vals = on_box(n, lo, hi);
    DenseBox box{lo, std::vector<int>(dim_)};
    for (int j = 0; j < dim_; ++j)
        box.shape[j] = n * extent_[j] + 1;
    std::map<LatticePoint, Complex> out;
    for (std::size_t k = 0; k < vals.size(); ++k)
        out.emplace(box.point(k), vals[k]);
    return LatticeFunction::numeric(dim_, out);
}

LatticeFunction conv_power(const LatticeFunction& phi, int n, PowerMethod method, const FftOptions& opt)
{
    if (n < 1)
        throw std::invalid_argument("conv_power: n must be positive");
    if (n == 1)
        return method == PowerMethod::fft ? phi.to_numeric() : phi;
    if (method == PowerMethod::fft)
        return FftPowers(phi, n, opt).power(n);
    if (phi.is_exact())
        return power_exact(phi, n);
    LatticeFunction result(phi.dim());
    direct_powers_numeric(phi, n, [&](int k, const LatticePoint& lo, const std::vector<int>& shape,
                                       const std::vector<Complex>& vals) {
        if (k != n)
            return;
        DenseBox box{lo, shape};
        std::map<LatticePoint, Complex> out;
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i] != Complex(0.0))
                out.emplace(box.point(i), vals[i]);
        result = LatticeFunction::numeric(phi.dim(), out);
    });
    return result;
}

TrigPolynomial::TrigPolynomial(const LatticeFunction& phi) : dim_(phi.dim())
{
    for (const auto& [x, v] : phi.values()) {
        Eigen::VectorXd p(dim_);
        for (int j = 0; j < dim_; ++j)
            p(j) = x[j];
        points_.push_back(p);
        coeffs_.push_back(v);
    }
}

namespace {

// Neumaier summation
struct Compensated {
    double sum = 0.0, carry = 0.0;
    void add(double v)
    {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

Complex TrigPolynomial::operator()(const Eigen::VectorXd& xi) const
{
    if (xi.size() != dim_)
        throw std::invalid_argument("fourier_eval: xi has wrong dimension");
    Compensated re, im;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        Complex t = coeffs_[k] * std::polar(1.0, points_[k].dot(xi));
        re.add(t.real());
        im.add(t.imag());
    }
    return {re.value(), im.value()};
}

void TrigPolynomial::derivatives(const Eigen::VectorXd& xi, Complex& value, Eigen::VectorXcd& grad,
                                 Eigen::MatrixXcd& hess) const
{
    value = (*this)(xi);
    grad = Eigen::VectorXcd::Zero(dim_);
    hess = Eigen::MatrixXcd::Zero(dim_, dim_);
    const Complex I(0.0, 1.0);
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const Eigen::VectorXd& x = points_[k];
        Complex t = coeffs_[k] * std::polar(1.0, x.dot(xi));
        for (int a = 0; a < dim_; ++a) {
            grad(a) += I * x(a) * t;
            for (int b = 0; b < dim_; ++b)
                hess(a, b) -= x(a) * x(b) * t;
        }
    }
}

double TrigPolynomial::modulus2(const Eigen::VectorXd& xi, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const
{
    if (!grad && !hess)
        return std::norm((*this)(xi));
    Complex v;
    Eigen::VectorXcd g;
    Eigen::MatrixXcd h;
    derivatives(xi, v, g, h);
    if (grad) {
        grad->resize(dim_);
        for (int a = 0; a < dim_; ++a)
            (*grad)(a) = 2.0 * (std::conj(v) * g(a)).real();
    }
    if (hess) {
        hess->resize(dim_, dim_);
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b)
                (*hess)(a, b) = 2.0 * (std::conj(g(b)) * g(a) + std::conj(v) * h(a, b)).real();
    }
    return std::norm(v);
}

Complex fourier_eval(const LatticeFunction& phi, const Eigen::VectorXd& xi) { return TrigPolynomial(phi)(xi); }

Eigen::VectorXd wrap_torus(const Eigen::VectorXd& xi)
{
    Eigen::VectorXd w(xi.size());
    for (Eigen::Index j = 0; j < xi.size(); ++j) {
        double a = std::remainder(xi(j), 2.0 * M_PI);  // in [-pi, pi]
        if (a <= -M_PI + 1e-9)
            a += 2.0 * M_PI;
        w(j) = a;
    }
    return w;
}

double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        double t = std::abs(std::remainder(a(j) - b(j), 2.0 * M_PI));
        s += t * t;
    }
    return std::sqrt(s);
}

namespace {

Eigen::VectorXd ascend(const TrigPolynomial& tp, Eigen::VectorXd x, double radius, double tol)
{
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXd g;
        Eigen::MatrixXd h;
        double f = tp.modulus2(x, &g, &h);
        if (g.norm() < 1e-15)
            return x;
        Eigen::VectorXd step;
        Eigen::LLT<Eigen::MatrixXd> llt(-h);
        if (llt.info() == Eigen::Success)
            step = llt.solve(g);
        else
            step = g / g.norm() * radius;
        if (step.norm() > radius)
            step *= radius / step.norm();
        double predicted = g.dot(step) + 0.5 * step.dot(h * step);
        double f_new = tp.modulus2(x + step);
        if (f_new >= f) {
            x += step;
            if (predicted > 0.0 && (f_new - f) > 0.75 * predicted)
                radius = std::min(2.0 * radius, 1.0);
            if (step.norm() < tol)
                return x;
        } else {
            radius = 0.25 * step.norm();
        }
        if (radius < tol)
            return x;
    }
    throw std::runtime_error("find_omega: ascent did not converge");
}

// Replace coordinates by nearby multiples of pi/q when that does not lower |phi_hat|.
Eigen::VectorXd snap(const TrigPolynomial& tp, Eigen::VectorXd x)
{
    double f = std::sqrt(tp.modulus2(x));
    for (Eigen::Index j = 0; j < x.size(); ++j)
        for (int q = 1; q <= 12; ++q) {
            Eigen::VectorXd y = x;
            y(j) = std::round(x(j) * q / M_PI) * M_PI / q;
            if (std::abs(y(j) - x(j)) > 1e-2)
                continue;
            double fy = std::sqrt(tp.modulus2(y));
            if (fy >= f - 1e-14) {
                x = y;
                f = std::max(f, fy);
                break;
            }
        }
    return x;
}

bool on_pi_lattice(const Eigen::VectorXd& x)
{
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        bool hit = false;
        for (int q = 1; q <= 12 && !hit; ++q)
            hit = std::abs(x(j) * q / M_PI - std::round(x(j) * q / M_PI)) < 1e-12;
        if (!hit)
            return false;
    }
    return true;
}

bool joined_by_ridge(const TrigPolynomial& tp, const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    Eigen::VectorXd delta(a.size());
    for (Eigen::Index j = 0; j < a.size(); ++j)
        delta(j) = std::remainder(b(j) - a(j), 2.0 * M_PI);
    for (int k = 1; k < 32; ++k)
        if (std::sqrt(tp.modulus2(a + delta * (k / 32.0))) < 1.0 - 1e-9)
            return false;
    return true;
}

}  // namespace

MaxModulusSet find_omega(const LatticeFunction& phi, const OmegaOptions& opt)
{
    const int d = phi.dim();
    const int n = opt.grid_per_axis;
    if (n < 4)
        throw std::invalid_argument("find_omega: grid too coarse");
    TrigPolynomial tp(phi);
    DenseBox g{LatticePoint(d, 0), std::vector<int>(d, n)};
    const std::size_t cells = g.cells();
    auto node = [&](const LatticePoint& k) {
        Eigen::VectorXd xi(d);
        for (int j = 0; j < d; ++j)
            xi(j) = -M_PI + 2.0 * M_PI * (k[j] + 1) / n;
        return xi;
    };
    std::vector<double> mod(cells);
    const std::size_t block = 4096;
    parallel_blocks((cells + block - 1) / block, [&](std::size_t b) {
        for (std::size_t k = b * block; k < std::min(cells, (b + 1) * block); ++k)
            mod[k] = std::abs(tp(node(g.point(k))));
    });

    MaxModulusSet out;
    out.sup_modulus = *std::max_element(mod.begin(), mod.end());
    if (out.sup_modulus > 1.0 + 1e-9)
        throw std::domain_error("find_omega: sup |phi_hat| > 1 (input not normalized)");
    std::size_t flat = std::count_if(mod.begin(), mod.end(), [](double v) { return v >= 1.0 - 1e-9; });
    if (2 * flat > cells)
        throw std::domain_error("find_omega: |phi_hat| = 1 on most of the torus, not finitely many maxima");

    std::vector<Eigen::VectorXd> found;
    const int neighbours = static_cast<int>(std::pow(3, d));
    for (std::size_t k = 0; k < cells; ++k) {
        if (mod[k] < opt.candidate_floor)
            continue;
        LatticePoint p = g.point(k);
        bool is_max = true;
        for (int c = 0; c < neighbours && is_max; ++c) {
            LatticePoint q = p;
            int code = c;
            bool self = true;
            for (int j = 0; j < d; ++j) {
                int off = code % 3 - 1;
                code /= 3;
                self = self && off == 0;
                q[j] = floor_mod(p[j] + off, n);
            }
            if (!self && mod[g.index(q)] > mod[k])
                is_max = false;
        }
        if (!is_max)
            continue;
        Eigen::VectorXd xi = wrap_torus(snap(tp, ascend(tp, node(p), M_PI / n, opt.refine_tol)));
        double m = std::sqrt(tp.modulus2(xi));
        out.sup_modulus = std::max(out.sup_modulus, m);
        if (m > 1.0 + 1e-9)
            throw std::domain_error("find_omega: sup |phi_hat| > 1 (input not normalized)");
        if (m < 1.0 - 1e-9)
            continue;
        bool merged = false;
        for (auto& f : found)
            if (torus_distance(f, xi) < opt.merge_tol) {
                merged = true;
                break;
            }
        if (!merged)
            found.push_back(xi);
    }
    if (found.empty())
        throw std::domain_error("find_omega: no point with |phi_hat| = 1 found");

    // Candidates joined by a path of modulus 1 (to double precision) form a
    // cluster. A flat but isolated maximum leaves stalled ascents around one
    // lattice point k pi / q; two such points in a cluster mean a ridge.
    std::vector<std::size_t> parent(found.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = root(parent[i]);
    };
    for (std::size_t i = 0; i < found.size(); ++i)
        for (std::size_t j = i + 1; j < found.size(); ++j)
            if (joined_by_ridge(tp, found[i], found[j]))
                parent[root(i)] = root(j);
    std::vector<Eigen::VectorXd> kept;
    for (std::size_t c = 0; c < found.size(); ++c) {
        if (root(c) != c)
            continue;
        std::vector<std::size_t> members, on_lattice;
        for (std::size_t i = 0; i < found.size(); ++i)
            if (root(i) == c) {
                members.push_back(i);
                if (on_pi_lattice(found[i]))
                    on_lattice.push_back(i);
            }
        if (members.size() == 1)
            kept.push_back(found[members[0]]);
        else if (on_lattice.size() == 1)
            kept.push_back(found[on_lattice[0]]);
        else
            throw std::domain_error("find_omega: maxima joined by a ridge of modulus 1, not finitely many maxima");
    }
    found = kept;

    for (const auto& xi : found)
        out.points.push_back({xi, std::abs(1.0 - std::abs(tp(xi)))});
    std::sort(out.points.begin(), out.points.end(), [](const MaxModulusPoint& a, const MaxModulusPoint& b) {
        return std::lexicographical_compare(a.xi.data(), a.xi.data() + a.xi.size(), b.xi.data(),
                                            b.xi.data() + b.xi.size());
    });

    // boundary of T_phi through the middle of the widest gap on each axis
    out.torus_shift = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j) {
        std::vector<double> c;
        for (const auto& p : out.points)
            c.push_back(p.xi(j));
        std::sort(c.begin(), c.end());
        double best_gap = -1.0, best_shift = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            double a = c[i], b = i + 1 < c.size() ? c[i + 1] : c[0] + 2.0 * M_PI;
            double gap = b - a;
            double shift = std::remainder(0.5 * (a + b) + M_PI, 2.0 * M_PI);
            if (gap > best_gap + 1e-12 || (std::abs(gap - best_gap) <= 1e-12 && std::abs(shift) < std::abs(best_shift))) {
                best_gap = gap;
                best_shift = shift;
            }
        }
        out.torus_shift(j) = std::abs(best_shift) < 1e-12 ? 0.0 : best_shift;
    }
    return out;
}

InversionReport inversion_check(const LatticeFunction& phi, int n, const std::vector<LatticePoint>& x_list,
                                const std::vector<int>& quad_nodes)
{
    const int d = phi.dim();
    InversionReport rep;
    rep.points = x_list;
    const LatticePoint lo = phi.lower(), hi = phi.upper();
    rep.nodes.resize(d);
    for (int j = 0; j < d; ++j) {
        int a = n * lo[j], b = n * hi[j];
        for (const auto& x : x_list)
            if (static_cast<int>(x.size()) == d) {
                a = std::min(a, x[j]);
                b = std::max(b, x[j]);
            }
        int need = b - a + 1;
        rep.nodes[j] = quad_nodes.empty() ? need : std::max(need, quad_nodes[j]);
    }
    DenseBox g{LatticePoint(d, 0), rep.nodes};
    const std::size_t cells = g.cells();
    TrigPolynomial tp(phi);
    std::vector<Eigen::VectorXd> nodes(cells);
    std::vector<Complex> powered(cells);
    parallel_blocks(cells, [&](std::size_t k) {
        LatticePoint p = g.point(k);
        Eigen::VectorXd xi(d);
        for (int j = 0; j < d; ++j)
            xi(j) = -M_PI + 2.0 * M_PI * p[j] / rep.nodes[j];
        nodes[k] = xi;
        powered[k] = ipow(tp(xi), n);
    });
    LatticeFunction direct = conv_power(phi, n, PowerMethod::direct);
    for (const auto& x : x_list) {
        if (static_cast<int>(x.size()) != d)
            throw std::invalid_argument("inversion_check: point has wrong dimension");
        Eigen::VectorXd xv(d);
        for (int j = 0; j < d; ++j)
            xv(j) = x[j];
        Compensated re, im;
        for (std::size_t k = 0; k < cells; ++k) {
            Complex t = powered[k] * std::polar(1.0, -xv.dot(nodes[k]));
            re.add(t.real());
            im.add(t.imag());
        }
        Complex q = Complex(re.value(), im.value()) / static_cast<double>(cells);
        Complex ref = direct(x);
        rep.quadrature.push_back(q);
        rep.direct.push_back(ref);
        rep.max_residual = std::max(rep.max_residual, std::abs(q - ref));
    }
    rep.pass = rep.max_residual <= 1e-9;
    return rep;
}

}  // namespace aniso
