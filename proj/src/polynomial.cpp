#include "aniso/polynomial.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aniso {

int total_degree(const MultiIndex& beta) { return std::accumulate(beta.begin(), beta.end(), 0); }

Rational weighted_degree(const MultiIndex& beta, const std::vector<int>& n)
{
    if (beta.size() != n.size())
        throw std::invalid_argument("weighted_degree: size mismatch");
    Rational w(0);
    for (std::size_t j = 0; j < beta.size(); ++j)
        w += Rational(beta[j]) / Rational(n[j]);
    return w;
}

namespace {

double ipow(double x, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

Rational ipow(const Rational& x, int k)
{
    Rational r(1);
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

}  // namespace

Polynomial::Polynomial(int dim) : dim_(dim)
{
    if (dim <= 0)
        throw std::invalid_argument("polynomial dimension must be positive");
}

Polynomial::Polynomial(int dim, const std::map<MultiIndex, Rational>& terms) : Polynomial(dim)
{
    for (const auto& [beta, c] : terms) {
        if (static_cast<int>(beta.size()) != dim)
            throw std::invalid_argument("multi-index length does not match dimension");
        for (int b : beta)
            if (b < 0)
                throw std::invalid_argument("negative exponent in multi-index");
        if (c != 0) {
            terms_.emplace(beta, c);
            fast_.emplace_back(beta, to_double(c));
        }
    }
}

Rational Polynomial::coefficient(const MultiIndex& beta) const
{
    auto it = terms_.find(beta);
    return it == terms_.end() ? Rational(0) : it->second;
}

double Polynomial::eval(const Eigen::VectorXd& x) const
{
    if (x.size() != dim_)
        throw std::invalid_argument("polynomial eval: dimension mismatch");
    double s = 0.0;
    for (const auto& [beta, c] : fast_) {
        double t = c;
        for (int j = 0; j < dim_; ++j)
            t *= ipow(x(j), beta[j]);
        s += t;
    }
    return s;
}

Rational Polynomial::eval_exact(const std::vector<Rational>& x) const
{
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("polynomial eval: dimension mismatch");
    Rational s(0);
    for (const auto& [beta, c] : terms_) {
        Rational t = c;
        for (int j = 0; j < dim_; ++j)
            t *= ipow(x[j], beta[j]);
        s += t;
    }
    return s;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const
{
    if (x.size() != dim_)
        throw std::invalid_argument("polynomial gradient: dimension mismatch");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    for (const auto& [beta, c] : fast_)
        for (int i = 0; i < dim_; ++i) {
            if (beta[i] == 0)
                continue;
            double t = c * beta[i];
            for (int j = 0; j < dim_; ++j)
                t *= ipow(x(j), j == i ? beta[j] - 1 : beta[j]);
            g(i) += t;
        }
    return g;
}

std::vector<Rational> Polynomial::gradient_exact(const std::vector<Rational>& x) const
{
    std::vector<Rational> g;
    for (int i = 0; i < dim_; ++i)
        g.push_back(partial(i).eval_exact(x));
    return g;
}

Polynomial Polynomial::partial(int axis) const
{
    std::map<MultiIndex, Rational> out;
    for (const auto& [beta, c] : terms_) {
        if (beta[axis] == 0)
            continue;
        MultiIndex b = beta;
        b[axis] -= 1;
        out[b] += c * beta[axis];
    }
    return Polynomial(dim_, out);
}

bool Polynomial::weighted_homogeneous(const std::vector<int>& n, const Rational& degree) const
{
    for (const auto& [beta, c] : terms_)
        if (weighted_degree(beta, n) != degree)
            return false;
    return true;
}

std::string Polynomial::str() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [beta, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (int j = 0; j < dim_; ++j)
            if (beta[j] > 0)
                os << "*x" << j + 1 << (beta[j] > 1 ? "^" + std::to_string(beta[j]) : "");
    }
    return first ? "0" : os.str();
}

}  // namespace aniso
