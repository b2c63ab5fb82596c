#include "aniso/power_series.hpp"

#include <sstream>
#include <stdexcept>

namespace aniso {

PowerSeries::PowerSeries(int dim, int max_degree) : dim_(dim), max_degree_(max_degree)
{
    if (dim < 1 || max_degree < 0)
        throw std::invalid_argument("PowerSeries: bad dimension or degree");
}

PowerSeries PowerSeries::constant(int dim, int max_degree, const ComplexRational& c)
{
    PowerSeries s(dim, max_degree);
    s.set(MultiIndex(dim, 0), c);
    return s;
}

PowerSeries PowerSeries::variable(int dim, int max_degree, int axis)
{
    PowerSeries s(dim, max_degree);
    MultiIndex beta(dim, 0);
    beta.at(axis) = 1;
    s.set(beta, ComplexRational(1));
    return s;
}

ComplexRational PowerSeries::coefficient(const MultiIndex& beta) const
{
    auto it = terms_.find(beta);
    return it == terms_.end() ? ComplexRational(0) : it->second;
}

void PowerSeries::set(const MultiIndex& beta, const ComplexRational& c)
{
    if (static_cast<int>(beta.size()) != dim_)
        throw std::invalid_argument("PowerSeries: multi-index has wrong dimension");
    if (total_degree(beta) > max_degree_)
        return;
    if (c.is_zero())
        terms_.erase(beta);
    else
        terms_[beta] = c;
}

void PowerSeries::add(const MultiIndex& beta, const ComplexRational& c)
{
    set(beta, coefficient(beta) + c);
}

PowerSeries PowerSeries::truncated(int degree) const
{
    PowerSeries s(dim_, std::min(degree, max_degree_));
    for (const auto& [b, c] : terms_)
        s.set(b, c);
    return s;
}

std::complex<double> PowerSeries::eval(const Eigen::VectorXd& xi) const
{
    std::complex<double> s = 0.0;
    for (const auto& [b, c] : terms_) {
        double m = 1.0;
        for (int j = 0; j < dim_; ++j)
            m *= std::pow(xi(j), b[j]);
        s += c.to_complex() * m;
    }
    return s;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o)
{
    if (o.dim_ != dim_)
        throw std::invalid_argument("PowerSeries: dimension mismatch");
    max_degree_ = std::min(max_degree_, o.max_degree_);
    *this = truncated(max_degree_);
    for (const auto& [b, c] : o.terms_)
        add(b, c);
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o)
{
    return *this += o * ComplexRational(-1);
}

PowerSeries& PowerSeries::operator*=(const ComplexRational& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [b, v] : terms_)
        v *= c;
    return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b)
{
    if (a.dim_ != b.dim_)
        throw std::invalid_argument("PowerSeries: dimension mismatch");
    PowerSeries out(a.dim_, std::min(a.max_degree_, b.max_degree_));
    std::map<MultiIndex, ComplexRational> acc;
    for (const auto& [ba, ca] : a.terms_) {
        const int da = total_degree(ba);
        for (const auto& [bb, cb] : b.terms_) {
            if (da + total_degree(bb) > out.max_degree_)
                continue;
            MultiIndex s(a.dim_);
            for (int j = 0; j < a.dim_; ++j)
                s[j] = ba[j] + bb[j];
            acc[s] += ca * cb;
        }
    }
    for (const auto& [bt, c] : acc)
        out.set(bt, c);
    return out;
}

std::string PowerSeries::str() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << '(' << to_string(c) << ')';
        for (int j = 0; j < dim_; ++j)
            if (b[j] > 0)
                os << "*x" << j + 1 << (b[j] > 1 ? "^" + std::to_string(b[j]) : "");
    }
    return first ? "0" : os.str();
}

PowerSeries log_series(const PowerSeries& s)
{
    if (!(s.constant_term() == ComplexRational(1)))
        throw std::invalid_argument("log_series: constant term must be 1");
    const int d = s.dim(), deg = s.max_degree();
    PowerSeries u = s - PowerSeries::constant(d, deg, ComplexRational(1));
    PowerSeries out(d, deg);
    PowerSeries power = u;
    for (int j = 1; j <= deg; ++j) {
        out += power * ComplexRational(Rational(j % 2 == 1 ? 1 : -1, j));
        power = power * u;
        if (power.terms().empty())
            break;
    }
    return out;
}

PowerSeries exp_series(const PowerSeries& u)
{
    if (!u.constant_term().is_zero())
        throw std::invalid_argument("exp_series: constant term must be 0");
    const int d = u.dim(), deg = u.max_degree();
    PowerSeries out = PowerSeries::constant(d, deg, ComplexRational(1));
    PowerSeries power = PowerSeries::constant(d, deg, ComplexRational(1));
    BigInt fact = 1;
    for (int j = 1; j <= deg; ++j) {
        power = power * u;
        if (power.terms().empty())
            break;
        fact *= j;
        out += power * ComplexRational(Rational(BigInt(1), fact));
    }
    return out;
}

}  // namespace aniso
