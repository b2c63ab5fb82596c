#include "aniso/decay.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "aniso/report.hpp"
#include "aniso/sampling.hpp"

namespace aniso {

std::vector<int> log_schedule(int n_min, int n_max, int per_octave)
{
    if (n_min < 1 || n_max < n_min || per_octave < 1)
        throw std::invalid_argument("log_schedule: bad range");
    std::set<int> ns;
    const double lo = std::log2(n_min), hi = std::log2(n_max);
    for (int j = static_cast<int>(std::ceil(lo * per_octave - 1e-9)); j <= std::floor(hi * per_octave + 1e-9); ++j)
        ns.insert(static_cast<int>(std::lround(std::pow(2.0, static_cast<double>(j) / per_octave))));
    ns.insert(n_min);
    ns.insert(n_max);
    return {ns.begin(), ns.end()};
}

HypothesisReport check_hypotheses(const LatticeFunction& phi, const OmegaOptions& opt)
{
    HypothesisReport rep;
    try {
        rep.omega = find_omega(phi, opt);
    } catch (const std::exception& e) {
        rep.reason = e.what();
        return rep;
    }
    std::ostringstream why;
    for (const auto& p : rep.omega.points) {
        PointClassification c = classify_point(phi, p.xi);
        rep.points.push_back(c);
        if (c.type == PointType::unclassified) {
            why << "point (" << p.xi.transpose() << ") unclassified: " << c.diagnostics << "; ";
            continue;
        }
        if (c.type == PointType::imaginary_homogeneous) {
            bool zero_drift = std::all_of(c.drift.begin(), c.drift.end(), [](const Rational& a) { return a == 0; });
            if (!zero_drift)
                why << "imaginary point (" << p.xi.transpose() << ") has nonzero drift; ";
            if (c.mu >= 1)
                why << "imaginary point (" << p.xi.transpose() << ") has mu >= 1; ";
        }
    }
    rep.reason = why.str();
    rep.pass = rep.reason.empty();
    if (rep.pass)
        rep.mu = mu_phi(rep.points);
    return rep;
}

std::vector<DecayRecord> decay_curve(const LatticeFunction& phi, const IntegerBox& k, const std::vector<int>& schedule,
                                     PowerMethod method, const FftOptions& fft, bool check_gate)
{
    if (schedule.empty())
        throw std::invalid_argument("decay_curve: empty schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("decay_curve: schedule must be strictly increasing");
    if (schedule.front() < 1)
        throw std::invalid_argument("decay_curve: n must be positive");
    if (check_gate) {
        HypothesisReport gate = check_hypotheses(phi);
        if (!gate.pass)
            throw std::domain_error("decay_curve: hypotheses not satisfied: " + gate.reason);
    }
    using Clock = std::chrono::steady_clock;
    auto elapsed_ms = [](Clock::time_point t0) {
        return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count());
    };
    std::vector<DecayRecord> out;
    const int n_max = schedule.back();
    if (method == PowerMethod::fft) {
        FftOptions opt = fft;
        opt.allow_truncation = true;
        auto t0 = Clock::now();
        FftPowers powers(phi, n_max, opt);
        long setup = elapsed_ms(t0);
        for (int n : schedule) {
            auto t1 = Clock::now();
            auto vals = powers.on_box(n, k.lo, k.hi);
            double f = 0.0;
            for (const auto& v : vals)
                f = std::max(f, std::abs(v));
            out.push_back({n, f, method, elapsed_ms(t1) + (out.empty() ? setup : 0)});
        }
        return out;
    }
    const int d = phi.dim();
    std::size_t next = 0;
    auto t0 = Clock::now();
    direct_powers_numeric(phi.to_numeric(), n_max, [&](int n, const LatticePoint& lo, const std::vector<int>& shape,
                                                       const std::vector<Complex>& vals) {
        if (next >= schedule.size() || n != schedule[next])
            return;
        std::vector<std::size_t> strides(d, 1);
        for (int j = d - 2; j >= 0; --j)
            strides[j] = strides[j + 1] * shape[j + 1];
        double f = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            std::size_t rem = i;
            bool inside = true;
            for (int j = 0; j < d; ++j) {
                int x = lo[j] + static_cast<int>(rem / strides[j]);
                rem %= strides[j];
                inside = inside && x >= k.lo[j] && x <= k.hi[j];
            }
            if (inside)
                f = std::max(f, std::abs(vals[i]));
        }
        out.push_back({n, f, method, elapsed_ms(t0)});
        t0 = Clock::now();
        ++next;
    });
    return out;
}

SlopeFit slope_fit(const std::vector<DecayRecord>& records, std::size_t window)
{
    std::vector<const DecayRecord*> use;
    if (window == 0) {
        if (records.empty())
            throw std::invalid_argument("slope_fit: no records");
        double cut = std::sqrt(static_cast<double>(records.front().n) * records.back().n);
        for (const auto& r : records)
            if (r.n >= cut - 1e-9)
                use.push_back(&r);
    } else {
        if (window > records.size())
            throw std::invalid_argument("slope_fit: window larger than record count");
        for (std::size_t i = records.size() - window; i < records.size(); ++i)
            use.push_back(&records[i]);
    }
    if (use.size() < 4)
        throw std::invalid_argument("slope_fit: need at least 4 records in the window");
    std::vector<double> x, y;
    for (const auto* r : use) {
        if (!(r->f_n > 0.0))
            throw std::domain_error("slope_fit: zero f(n) in window");
        x.push_back(std::log(static_cast<double>(r->n)));
        y.push_back(std::log(r->f_n));
    }
    const double k = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    SlopeFit fit;
    fit.points = x.size();
    fit.slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - my - fit.slope * (x[i] - mx);
        sse += e * e;
    }
    fit.std_error = std::sqrt(sse / (k - 2.0) / sxx);
    return fit;
}

BoundCheck theorem_bound_check(const std::vector<DecayRecord>& records, double mu)
{
    if (records.empty())
        throw std::invalid_argument("theorem_bound_check: no records");
    BoundCheck b;
    const std::size_t early = std::max<std::size_t>(1, (3 * records.size()) / 4);
    for (std::size_t i = 0; i < records.size(); ++i) {
        double v = records[i].f_n * std::pow(static_cast<double>(records[i].n), mu);
        b.c_hat = std::max(b.c_hat, v);
        if (i < early)
            b.early_max = std::max(b.early_max, v);
    }
    b.pass = b.c_hat <= 1.05 * b.early_max;
    return b;
}

void write_decay_csv(std::ostream& os, const std::vector<DecayRecord>& records, double mu, bool with_timing)
{
    os << "n,f_n,f_n_times_n_mu,method,runtime_ms\n";
    for (const auto& r : records)
        os << r.n << ',' << format_double(r.f_n) << ',' << format_double(r.f_n * std::pow(double(r.n), mu)) << ','
           << (r.method == PowerMethod::fft ? "fft" : "direct") << ',' << (with_timing ? r.runtime_ms : 0) << '\n';
}

void write_decay_plot(std::ostream& os, const std::string& csv_name, double mu, const std::string& title)
{
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel 'log_2 n'\n"
       << "set ylabel 'log_2 f(n)'\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << csv_name << ".png'\n"
       << "mu = " << format_double(mu) << "\n"
       << "plot '" << csv_name << "' using (log($1)/log(2)):(log($2)/log(2)) with linespoints title 'log_2 f(n)', \\\n"
       << "     '' using (log($1)/log(2)):(-mu*log($1)/log(2)) with lines title 'log_2 n^{-mu}'\n";
}

namespace {

TorusGrid make_grid(const LatticeFunction& phi, int n, const Eigen::VectorXd& shift, const std::vector<int>& quad_nodes)
{
    TorusGrid g;
    g.shift = shift;
    auto ext = phi.extent();
    for (int j = 0; j < phi.dim(); ++j) {
        int need = n * ext[j] + 1;
        g.nodes.push_back(quad_nodes.empty() ? need : std::max(need, quad_nodes[j]));
    }
    return g;
}

// Visits every node xi of the grid with its flat index.
void for_nodes(const TorusGrid& g, const std::function<void(std::size_t, const Eigen::VectorXd&)>& fn)
{
    const int d = static_cast<int>(g.nodes.size());
    std::size_t cells = 1;
    for (int v : g.nodes)
        cells *= static_cast<std::size_t>(v);
    const std::size_t block = 4096;
    parallel_blocks((cells + block - 1) / block, [&](std::size_t b) {
        Eigen::VectorXd xi(d);
        for (std::size_t k = b * block; k < std::min(cells, (b + 1) * block); ++k) {
            std::size_t rem = k;
            for (int j = d - 1; j >= 0; --j) {
                int i = static_cast<int>(rem % g.nodes[j]);
                rem /= g.nodes[j];
                xi(j) = g.shift(j) - M_PI + 2.0 * M_PI * (i + 0.5) / g.nodes[j];
            }
            fn(k, xi);
        }
    });
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

void check_inside(const Eigen::VectorXd& xi0, const Eigen::VectorXd& shift, double radius)
{
    for (Eigen::Index j = 0; j < xi0.size(); ++j) {
        double off = std::abs(std::remainder(xi0(j) - shift(j), 2.0 * M_PI));
        if (off + radius >= M_PI)
            throw std::invalid_argument("localized_integral: ball leaves the torus fundamental domain");
    }
}

}  // namespace

LocalizedDecomposition localized_decomposition(const LatticeFunction& phi, const MaxModulusSet& omega, double radius,
                                               int n, const LatticePoint& x, const std::vector<int>& quad_nodes)
{
    const int d = phi.dim();
    if (omega.points.empty())
        throw std::invalid_argument("localized_decomposition: empty maximum set");
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < omega.points.size(); ++a)
        for (std::size_t b = a + 1; b < omega.points.size(); ++b)
            min_dist = std::min(min_dist, torus_distance(omega.points[a].xi, omega.points[b].xi));
    if (radius <= 0.0)
        radius = std::min(0.5, min_dist / 3.0);
    if (2.0 * radius >= min_dist)
        throw std::invalid_argument("localized_decomposition: neighbourhoods overlap");
    for (const auto& p : omega.points)
        check_inside(p.xi, omega.torus_shift, radius);

    TorusGrid g = make_grid(phi, n, omega.torus_shift, quad_nodes);
    std::size_t cells = 1;
    for (int v : g.nodes)
        cells *= static_cast<std::size_t>(v);
    TrigPolynomial tp(phi);
    Eigen::VectorXd xv(d);
    for (int j = 0; j < d; ++j)
        xv(j) = x.at(j);
    const std::size_t parts = omega.points.size() + 1;
    std::vector<Complex> term(cells);
    std::vector<int> owner(cells);
    std::vector<double> modulus(cells);
    for_nodes(g, [&](std::size_t k, const Eigen::VectorXd& xi) {
        Complex v = tp(xi);
        modulus[k] = std::abs(v);
        term[k] = ipow(v, n) * std::polar(1.0, -xv.dot(xi));
        owner[k] = static_cast<int>(parts - 1);
        for (std::size_t p = 0; p < omega.points.size(); ++p)
            if (torus_distance(xi, omega.points[p].xi) < radius) {
                owner[k] = static_cast<int>(p);
                break;
            }
    });
    // sequential sums keep the result independent of the thread count
    std::vector<Complex> sums(parts, 0.0);
    LocalizedDecomposition out;
    out.radius = radius;
    for (std::size_t k = 0; k < cells; ++k) {
        sums[owner[k]] += term[k];
        if (owner[k] == static_cast<int>(parts - 1)) {
            out.s = std::max(out.s, modulus[k]);
            out.complement_max = std::max(out.complement_max, std::pow(modulus[k], n));
        }
    }
    const double scale = 1.0 / static_cast<double>(cells);
    for (std::size_t p = 0; p + 1 < parts; ++p)
        out.localized.push_back(sums[p] * scale);
    out.complement = sums[parts - 1] * scale;
    out.total = out.complement;
    for (const auto& v : out.localized)
        out.total += v;
    out.direct = conv_power(phi, n, PowerMethod::direct)(x);
    out.residual = std::abs(out.total - out.direct);
    return out;
}

Complex localized_integral(const LatticeFunction& phi, const Eigen::VectorXd& xi0, double radius, int n,
                           const LatticePoint& x, const std::vector<int>& quad_nodes)
{
    const int d = phi.dim();
    if (!(radius > 0.0))
        throw std::invalid_argument("localized_integral: radius must be positive");
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j)
        shift(j) = std::abs(xi0(j)) > M_PI / 2 ? M_PI : 0.0;
    if (radius < M_PI)
        check_inside(xi0, shift, radius);
    TorusGrid g = make_grid(phi, n, shift, quad_nodes);
    std::size_t cells = 1;
    for (int v : g.nodes)
        cells *= static_cast<std::size_t>(v);
    TrigPolynomial tp(phi);
    Eigen::VectorXd xv(d);
    for (int j = 0; j < d; ++j)
        xv(j) = x.at(j);
    std::vector<Complex> term(cells, 0.0);
    for_nodes(g, [&](std::size_t k, const Eigen::VectorXd& xi) {
        if (torus_distance(xi, xi0) < radius)
            term[k] = ipow(tp(xi), n) * std::polar(1.0, -xv.dot(xi));
    });
    Complex s = 0.0;
    for (const auto& t : term)
        s += t;
    return s / static_cast<double>(cells);
}

}  // namespace aniso
