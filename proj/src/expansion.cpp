#include "aniso/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "aniso/sampling.hpp"

namespace aniso {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

// All multi-indices in d variables with total degree <= deg.
std::vector<MultiIndex> indices_up_to(int d, int deg)
{
    std::vector<MultiIndex> out;
    MultiIndex b(d, 0);
    std::function<void(int, int)> rec = [&](int j, int left) {
        if (j == d - 1) {
            for (int v = 0; v <= left; ++v) {
                b[j] = v;
                out.push_back(b);
            }
            return;
        }
        for (int v = 0; v <= left; ++v) {
            b[j] = v;
            rec(j + 1, left - v);
        }
    };
    rec(0, deg);
    return out;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

Rational quad_to_rational(const Quad& v)
{
    if (v == 0)
        return Rational(0);
    int e = 0;
    Quad m = boost::multiprecision::frexp(v, &e);  // v = m 2^e, 0.5 <= |m| < 1
    const int bits = std::numeric_limits<Quad>::digits;
    Quad scaled = boost::multiprecision::ldexp(m, bits);
    boost::multiprecision::cpp_int mant = scaled.convert_to<boost::multiprecision::cpp_int>();
    Rational r{BigInt(mant.str())};
    int shift = e - bits;
    BigInt two_pow = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(std::abs(shift)));
    return shift >= 0 ? r * Rational(two_pow) : r / Rational(two_pow);
}

Quad rational_to_quad(const Rational& q)
{
    Quad num(boost::multiprecision::numerator(q).str());
    Quad den(boost::multiprecision::denominator(q).str());
    return num / den;
}

Rational sum_inverse_weights(const std::vector<int>& m)
{
    Rational mu(0);
    for (int v : m)
        mu += Rational(1, 2 * v);
    return mu;
}

std::vector<int> doubled(const std::vector<int>& m)
{
    std::vector<int> n(m.size());
    for (std::size_t j = 0; j < m.size(); ++j)
        n[j] = 2 * m[j];
    return n;
}

double abs_value(const Rational& q) { return std::abs(to_double(q)); }

int required_degree(const std::vector<int>& m, const Rational& k)
{
    Rational need = Rational(2 * *std::max_element(m.begin(), m.end())) * (k > 1 ? k : Rational(1));
    BigInt c = boost::multiprecision::numerator(need) / boost::multiprecision::denominator(need);
    if (Rational(c) < need)
        c += 1;
    return c.convert_to<int>();
}

}  // namespace

bool taylor_is_exact(const LatticeFunction& phi, const Eigen::VectorXd& xi0)
{
    if (!phi.is_exact())
        return false;
    for (Eigen::Index j = 0; j < xi0.size(); ++j) {
        double a = xi0(j);
        if (!(near(a, 0.0) || near(a, M_PI) || near(a, -M_PI)))
            return false;
    }
    return true;
}

PowerSeries taylor_at(const LatticeFunction& phi, const Eigen::VectorXd& xi0, int max_degree)
{
    const int d = phi.dim();
    if (xi0.size() != d)
        throw std::invalid_argument("taylor_at: xi0 has wrong dimension");
    PowerSeries s(d, max_degree);
    const auto indices = indices_up_to(d, max_degree);
    if (taylor_is_exact(phi, xi0)) {
        std::vector<bool> at_pi(d);
        for (int j = 0; j < d; ++j)
            at_pi[j] = !near(xi0(j), 0.0);
        for (const auto& beta : indices) {
            ComplexRational acc;
            for (const auto& [x, v] : phi.exact_values()) {
                BigInt mono = 1;
                int parity = 0;
                for (int j = 0; j < d; ++j) {
                    mono *= boost::multiprecision::pow(BigInt(x[j]), static_cast<unsigned>(beta[j]));
                    if (at_pi[j])
                        parity += x[j];
                }
                if (mono == 0)
                    continue;
                if (parity % 2 != 0)
                    mono = -mono;
                acc += v * ComplexRational(Rational(mono));
            }
            if (acc.is_zero())
                continue;
            BigInt fact = 1;
            for (int b : beta)
                for (int i = 2; i <= b; ++i)
                    fact *= i;
            s.set(beta, acc * i_power(total_degree(beta)) * ComplexRational(Rational(BigInt(1), fact)));
        }
        return s;
    }

    const Quad pi = boost::math::constants::pi<Quad>();
    struct Entry {
        std::vector<Quad> x;
        Quad re, im;  // phi(x) e^{i x.xi0}
    };
    std::vector<Entry> entries;
    for (const auto& [x, v] : phi.values()) {
        Entry e;
        Quad phase = 0;
        for (int j = 0; j < d; ++j) {
            e.x.push_back(Quad(x[j]));
            Quad a = near(xi0(j), M_PI) ? pi : near(xi0(j), -M_PI) ? -pi : Quad(xi0(j));
            phase += Quad(x[j]) * a;
        }
        Quad vr = phi.is_exact() ? rational_to_quad(phi.exact_at(x).re) : Quad(v.real());
        Quad vi = phi.is_exact() ? rational_to_quad(phi.exact_at(x).im) : Quad(v.imag());
        Quad c = cos(phase), sn = sin(phase);
        e.re = vr * c - vi * sn;
        e.im = vr * sn + vi * c;
        entries.push_back(e);
    }
    for (const auto& beta : indices) {
        Quad re = 0, im = 0;
        for (const auto& e : entries) {
            Quad mono = 1;
            for (int j = 0; j < d; ++j)
                mono *= pow(e.x[j], beta[j]);
            re += e.re * mono;
            im += e.im * mono;
        }
        Quad fact = 1;
        for (int b : beta)
            for (int i = 2; i <= b; ++i)
                fact *= i;
        re /= fact;
        im /= fact;
        // multiply by i^{|beta|}
        switch (total_degree(beta) % 4) {
        case 1: std::swap(re, im); re = -re; break;
        case 2: re = -re; im = -im; break;
        case 3: std::swap(re, im); im = -im; break;
        default: break;
        }
        if (abs(re) < 1e-24)
            re = 0;
        if (abs(im) < 1e-24)
            im = 0;
        s.set(beta, ComplexRational(quad_to_rational(re), quad_to_rational(im)));
    }
    return s;
}

PowerSeries gamma_series(const LatticeFunction& phi, const Eigen::VectorXd& xi0, int max_degree)
{
    PowerSeries s = taylor_at(phi, xi0, max_degree);
    ComplexRational c0 = s.constant_term();
    if (c0.is_zero())
        throw std::domain_error("gamma_series: phi_hat(xi0) = 0");
    return log_series(s * (ComplexRational(1) / c0));
}

std::string to_string(PointType t)
{
    switch (t) {
    case PointType::positive_homogeneous: return "positive_homogeneous";
    case PointType::imaginary_homogeneous: return "imaginary_homogeneous";
    default: return "unclassified";
    }
}

PointClassification decompose(const PowerSeries& gamma, const std::vector<int>& m, const Rational& k)
{
    const int d = gamma.dim();
    if (static_cast<int>(m.size()) != d)
        throw std::invalid_argument("decompose: weight tuple has wrong dimension");
    for (int v : m)
        if (v < 1)
            throw std::invalid_argument("decompose: weights must be positive");
    if (k < 1)
        throw std::invalid_argument("decompose: k must be >= 1");
    if (!gamma.constant_term().is_zero())
        throw std::invalid_argument("decompose: gamma(0) must be 0");
    if (required_degree(m, k) > gamma.max_degree())
        throw std::invalid_argument("decompose: series degree too low for these weights");

    PointClassification c;
    c.xi0 = Eigen::VectorXd::Zero(d);
    c.m = m;
    c.k = k;
    c.mu = sum_inverse_weights(m);
    c.drift.assign(d, Rational(0));
    c.truncation_degree = gamma.max_degree();
    const auto n = doubled(m);
    std::map<MultiIndex, Rational> q, r, qt, rt;
    for (const auto& [beta, coef] : gamma.terms()) {
        const Rational w = weighted_degree(beta, n);
        if (total_degree(beta) == 1) {
            if (coef.re != 0)
                throw std::domain_error("decompose: nonvanishing real linear part (xi0 is not a local maximum)");
            int axis = static_cast<int>(std::find(beta.begin(), beta.end(), 1) - beta.begin());
            c.drift[axis] = coef.im;
            continue;
        }
        if (coef.im != 0) {
            Rational a = -coef.im;
            if (w < 1)
                throw std::domain_error("decompose: imaginary term below weight 1");
            (w == 1 ? q : qt)[beta] = a;
        }
        if (coef.re != 0) {
            Rational b = -coef.re;
            if (w < k)
                throw std::domain_error("decompose: real term below weight k");
            (w == k ? r : rt)[beta] = b;
        }
    }
    c.Q = Polynomial(d, q);
    c.R = Polynomial(d, r);
    c.Q_tail = Polynomial(d, qt);
    c.R_tail = Polynomial(d, rt);
    return c;
}

std::vector<WeightChoice> infer_weights(const PowerSeries& gamma, int search_bound)
{
    const int d = gamma.dim();
    if (!gamma.constant_term().is_zero())
        throw std::invalid_argument("infer_weights: gamma(0) must be 0");
    if (search_bound < 1)
        throw std::invalid_argument("infer_weights: search bound must be positive");
    std::vector<WeightChoice> out;
    std::vector<int> m(d, 1);
    std::ostringstream seen;
    while (true) {
        const auto n = doubled(m);
        bool have_i = false, have_r = false;
        Rational wi, wr;
        for (const auto& [beta, coef] : gamma.terms()) {
            if (total_degree(beta) < 2)
                continue;
            Rational w = weighted_degree(beta, n);
            if (coef.im != 0 && (!have_i || w < wi)) {
                wi = w;
                have_i = true;
            }
            if (coef.re != 0 && (!have_r || w < wr)) {
                wr = w;
                have_r = true;
            }
        }
        std::optional<Rational> k;
        if (have_r) {
            if (have_i && wi == 1 && wr >= 1)
                k = wr;
            else if ((!have_i || wi > 1) && wr == 1)
                k = Rational(1);
        }
        if (k && required_degree(m, *k) <= gamma.max_degree())
            out.push_back({m, *k, sum_inverse_weights(m)});
        int j = 0;
        while (j < d && ++m[j] > search_bound)
            m[j++] = 1;
        if (j == d)
            break;
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "infer_weights: no admissible (m, k) with m_j <= " << search_bound
           << " and series degree " << gamma.max_degree() << "; nonzero terms:";
        int shown = 0;
        for (const auto& [beta, coef] : gamma.terms()) {
            if (shown++ == 8)
                break;
            os << " [";
            for (std::size_t j = 0; j < beta.size(); ++j)
                os << (j ? "," : "") << beta[j];
            os << "]=" << to_string(coef);
        }
        throw std::domain_error(os.str());
    }
    std::stable_sort(out.begin(), out.end(), [](const WeightChoice& a, const WeightChoice& b) { return a.mu > b.mu; });
    return out;
}

std::vector<Eigen::VectorXd> weighted_sphere_grid(const std::vector<int>& m, std::size_t count)
{
    const int d = static_cast<int>(m.size());
    std::vector<Eigen::VectorXd> out;
    for (const auto& w : sphere_grid(d, count)) {
        double norm = 0.0;
        for (int j = 0; j < d; ++j)
            norm += std::pow(std::abs(w(j)), 2 * m[j]);
        Eigen::VectorXd xi(d);
        for (int j = 0; j < d; ++j)
            xi(j) = w(j) / std::pow(norm, 1.0 / (2 * m[j]));
        out.push_back(xi);
    }
    return out;
}

PointClassification classify(const PowerSeries& gamma, const std::vector<int>& m, const Rational& k,
                             const std::vector<Eigen::VectorXd>& grid)
{
    PointClassification c = decompose(gamma, m, k);
    double min_q = std::numeric_limits<double>::infinity(), min_r = min_q;
    for (const auto& xi : grid) {
        min_q = std::min(min_q, std::abs(c.Q.eval(xi)));
        min_r = std::min(min_r, c.R.eval(xi));
    }
    c.min_abs_Q = c.Q.empty() ? 0.0 : min_q;
    c.min_R = c.R.empty() ? 0.0 : min_r;
    std::ostringstream os;
    os << c.diagnostics;
    if (k == 1) {
        if (c.min_R > 1e-9)
            c.type = PointType::positive_homogeneous;
        else
            os << "R not positive definite (min " << c.min_R << ")";
    } else {
        if (c.min_abs_Q > 1e-9 && c.min_R > 1e-9)
            c.type = PointType::imaginary_homogeneous;
        else
            os << "min |Q| = " << c.min_abs_Q << ", min R = " << c.min_R << " on the weighted sphere";
    }
    c.diagnostics = os.str();
    return c;
}

PointClassification classify_point(const LatticeFunction& phi, const Eigen::VectorXd& xi0, int search_bound,
                                   int max_degree)
{
    PointClassification fail;
    fail.xi0 = xi0;
    fail.truncation_degree = max_degree;
    PowerSeries gamma = gamma_series(phi, xi0, max_degree);
    if (!taylor_is_exact(phi, xi0)) {
        PowerSeries chopped(gamma.dim(), gamma.max_degree());
        for (const auto& [b, c] : gamma.terms())
            chopped.set(b, ComplexRational(abs_value(c.re) <= 1e-12 ? Rational(0) : c.re,
                                           abs_value(c.im) <= 1e-12 ? Rational(0) : c.im));
        gamma = chopped;
    }
    std::vector<WeightChoice> cands;
    try {
        cands = infer_weights(gamma, search_bound);
    } catch (const std::domain_error& e) {
        fail.diagnostics = e.what();
        return fail;
    }
    std::ostringstream notes;
    for (const auto& w : cands) {
        PointClassification c;
        try {
            c = classify(gamma, w.m, w.k, weighted_sphere_grid(w.m));
        } catch (const std::domain_error& e) {
            notes << "m=(";
            for (std::size_t j = 0; j < w.m.size(); ++j)
                notes << (j ? "," : "") << w.m[j];
            notes << ") k=" << to_string(w.k) << ": " << e.what() << "; ";
            continue;
        }
        c.xi0 = xi0;
        if (c.type != PointType::unclassified)
            return c;
        notes << "m=(";
        for (std::size_t j = 0; j < w.m.size(); ++j)
            notes << (j ? "," : "") << w.m[j];
        notes << ") k=" << to_string(w.k) << ": " << c.diagnostics << "; ";
    }
    fail.diagnostics = notes.str();
    return fail;
}

Rational mu_phi(const std::vector<PointClassification>& points)
{
    if (points.empty())
        throw std::invalid_argument("mu_phi: no points");
    Rational mu = points.front().mu;
    for (const auto& p : points) {
        if (p.type == PointType::unclassified)
            throw std::domain_error("mu_phi: unclassified point");
        mu = std::min(mu, p.mu);
    }
    return mu;
}

PowerSeries reassemble(const PointClassification& c, int dim, int max_degree)
{
    PowerSeries s(dim, max_degree);
    for (int j = 0; j < dim; ++j) {
        MultiIndex b(dim, 0);
        b[j] = 1;
        s.add(b, ComplexRational(Rational(0), c.drift.at(j)));
    }
    for (const Polynomial* p : {&c.Q, &c.Q_tail})
        for (const auto& [b, a] : p->terms())
            s.add(b, ComplexRational(Rational(0), -a));
    for (const Polynomial* p : {&c.R, &c.R_tail})
        for (const auto& [b, v] : p->terms())
            s.add(b, ComplexRational(-v, Rational(0)));
    return s;
}

void write_classification(std::ostream& os, const PointClassification& c)
{
    os.precision(17);
    os << "xi0";
    for (Eigen::Index j = 0; j < c.xi0.size(); ++j)
        os << ' ' << c.xi0(j);
    os << "\ntype " << to_string(c.type) << "\ndrift";
    for (const auto& a : c.drift)
        os << ' ' << to_string(a);
    os << "\nm";
    for (int v : c.m)
        os << ' ' << v;
    os << "\nk " << to_string(c.k) << "\nmu " << to_string(c.mu) << '\n';
    auto table = [&](const char* name, const Polynomial& p) {
        os << "table " << name << ' ' << p.terms().size() << '\n';
        for (const auto& [b, v] : p.terms()) {
            for (int e : b)
                os << e << ' ';
            os << boost::multiprecision::numerator(v) << ' ' << boost::multiprecision::denominator(v) << '\n';
        }
    };
    table("Q", c.Q);
    table("R", c.R);
    table("Q_tail", c.Q_tail);
    table("R_tail", c.R_tail);
}

}  // namespace aniso
