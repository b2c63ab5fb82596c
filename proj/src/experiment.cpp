#include "aniso/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/version.hpp>
#include <fftw3.h>

#include "aniso/decay.hpp"
#include "aniso/expansion.hpp"
#include "aniso/oscillatory.hpp"
#include "aniso/power_series.hpp"

namespace aniso {

namespace fs = std::filesystem;

namespace {

const char* kVersion = "aniso 0.1.0";

std::vector<std::string> split(const std::string& s, const std::string& seps)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (seps.find(ch) != std::string::npos) {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + what + ": '" + s + "'");
    }
}

std::vector<double> parse_number_list(const std::string& s, const std::string& what)
{
    std::vector<double> out;
    for (const auto& tok : split(s, ", \t"))
        out.push_back(parse_number(tok, what));
    return out;
}

bool is_one_of(const std::string& s, std::initializer_list<const char*> options)
{
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return s == o; });
}

}  // namespace

ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    auto get = [&](const char* key) { return tree.get_optional<std::string>(key); };
    try {
        if (auto v = get("run.command"))
            cfg.command = *v;
        if (auto v = get("run.seed"))
            cfg.seed = std::stoull(*v);
        if (auto v = get("run.out"))
            cfg.out_dir = *v;
        if (auto v = get("run.samples"))
            cfg.samples = std::stoull(*v);
        if (auto v = get("run.suite"))
            cfg.suite = *v;
        if (auto v = get("function.name"))
            cfg.function = *v;
        if (auto v = get("function.terms"))
            cfg.semi_elliptic_terms = *v;
        if (auto v = get("function.weights"))
            cfg.semi_elliptic_weights = *v;
        if (auto v = get("function.exponent"))
            cfg.exponent = parse_number_list(*v, "function.exponent");
        if (auto v = get("region.spec"))
            cfg.region = *v;
        if (auto v = get("lattice.fixture"))
            cfg.fixture = *v;
        if (auto v = get("lattice.K"))
            cfg.k_half = std::stoi(*v);
        if (auto v = get("lattice.nmin"))
            cfg.n_min = std::stoi(*v);
        if (auto v = get("lattice.nmax"))
            cfg.n_max = std::stoi(*v);
        if (auto v = get("lattice.method"))
            cfg.method = *v;
        if (auto v = get("lattice.timing"))
            cfg.timing = *v == "1" || *v == "true" || *v == "yes";
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: bad value: ") + e.what());
    }
    return cfg;
}

std::string resolve_fixture(const std::string& name)
{
    if (name.size() > 4 && name.substr(name.size() - 4) == ".lat")
        return name;
    const char* env = std::getenv("ANISO_DATA_DIR");
    fs::path root = env && *env ? fs::path(env) : fs::path(ANISO_DATA_DIR);
    return (root / "fixtures" / (name + ".lat")).string();
}

LatticeFunction load_fixture(const std::string& name)
{
    std::string path = resolve_fixture(name);
    if (!fs::exists(path))
        throw ConfigError("fixture not found: " + path);
    try {
        return LatticeFunction::from_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("fixture " + path + ": " + e.what());
    }
}

PosHomFunction function_from_config(const ExperimentConfig& cfg)
{
    try {
        PosHomFunction p = [&] {
            if (cfg.semi_elliptic_terms.empty())
                return builtin(cfg.function);
            std::vector<int> weights;
            for (double w : parse_number_list(cfg.semi_elliptic_weights, "weights"))
                weights.push_back(static_cast<int>(w));
            const int d = static_cast<int>(weights.size());
            if (d == 0)
                throw ConfigError("semi-elliptic function needs weights");
            std::map<MultiIndex, Rational> terms;
            for (const auto& term : split(cfg.semi_elliptic_terms, " \t;")) {
                auto parts = split(term, ":");
                if (parts.size() != 2)
                    throw ConfigError("bad term '" + term + "', expected i,j:coef");
                MultiIndex beta;
                for (double b : parse_number_list(parts[0], "multi-index"))
                    beta.push_back(static_cast<int>(b));
                if (static_cast<int>(beta.size()) != d)
                    throw ConfigError("term '" + term + "' has the wrong dimension");
                terms[beta] += parse_rational(parts[1]);
            }
            std::string label = "semi_elliptic";
            for (const auto& term : split(cfg.semi_elliptic_terms, " \t;")) {
                std::string t = term;
                std::replace(t.begin(), t.end(), ',', '_');
                label += "+" + t;
            }
            return make_semi_elliptic(Polynomial(d, terms), weights, label);
        }();
        if (!cfg.exponent.empty()) {
            const int d = p.dim();
            if (static_cast<int>(cfg.exponent.size()) != d * d)
                throw ConfigError("exponent needs " + std::to_string(d * d) + " entries");
            p = p.with_exponent(Endomorphism::from_row_major(d, cfg.exponent));
        }
        return p;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

SurfaceRegion parse_region(const std::string& spec)
{
    if (spec == "all")
        return SurfaceRegion::all();
    if (spec == "none")
        return SurfaceRegion::none();
    if (spec == "quadrant")
        return SurfaceRegion::quadrant();
    auto parts = split(spec, ":");
    if (parts.size() == 2 && parts[0] == "half") {
        std::string a = parts[1];
        bool positive = true;
        if (!a.empty() && (a.back() == '+' || a.back() == '-')) {
            positive = a.back() == '+';
            a.pop_back();
        }
        int axis = static_cast<int>(parse_number(a, "region axis"));
        if (axis < 0)
            throw ConfigError("region axis must be non-negative");
        return SurfaceRegion::halfspace(axis, positive);
    }
    if (parts.size() == 3 && parts[0] == "arc")
        return SurfaceRegion::arc(parse_number(parts[1], "arc"), parse_number(parts[2], "arc"));
    throw ConfigError("unknown region '" + spec + "'");
}

void validate(const ExperimentConfig& cfg)
{
    if (!is_one_of(cfg.command, {"sigma", "integrate", "classify", "decay", "checks"}))
        throw ConfigError("unknown command '" + cfg.command + "'");
    const bool sampled = is_one_of(cfg.command, {"sigma", "integrate", "checks"});
    if (sampled && !cfg.seed)
        throw ConfigError(cfg.command + " needs a seed");
    if (cfg.samples < 1000)
        throw ConfigError("samples must be at least 1000");
    if (is_one_of(cfg.command, {"sigma", "integrate"})) {
        PosHomFunction p = function_from_config(cfg);
        parse_region(cfg.region);
        if (cfg.region.rfind("half:", 0) == 0) {
            int axis = static_cast<int>(parse_number(split(cfg.region, ":+-")[1], "axis"));
            if (axis >= p.dim())
                throw ConfigError("region axis out of range");
        }
    }
    if (is_one_of(cfg.command, {"classify", "decay"})) {
        if (cfg.fixture.empty())
            throw ConfigError(cfg.command + " needs --fixture");
        if (!fs::exists(resolve_fixture(cfg.fixture)))
            throw ConfigError("fixture not found: " + resolve_fixture(cfg.fixture));
    }
    if (cfg.command == "decay") {
        if (cfg.k_half < 0)
            throw ConfigError("K must be non-negative");
        if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
            throw ConfigError("need 1 <= nmin <= nmax");
        std::vector<int> schedule = log_schedule(cfg.n_min, cfg.n_max);
        const double cut = std::sqrt(static_cast<double>(schedule.front()) * schedule.back());
        if (std::count_if(schedule.begin(), schedule.end(), [cut](int n) { return n >= cut - 1e-9; }) < 4)
            throw ConfigError("schedule too short: the slope window needs at least 4 values of n");
        if (!is_one_of(cfg.method, {"fft", "direct"}))
            throw ConfigError("method must be fft or direct");
    }
    if (cfg.command == "checks" && !is_one_of(cfg.suite, {"group_laws", "properties", "vdc", "all"}))
        throw ConfigError("unknown suite '" + cfg.suite + "'");
}

// ---------------------------------------------------------------- suites

std::vector<CheckReport> group_law_suite(std::uint64_t seed, int endomorphisms, int pairs)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<CheckReport> out;
    for (int i = 0; i < endomorphisms; ++i) {
        const int d = 2 + i % 3;
        Matrix m(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                m(r, c) = normal(rng);
        m *= (0.1 + 4.9 * unit(rng)) / m.norm();
        std::vector<std::pair<double, double>> st;
        for (int j = 0; j < pairs; ++j) {
            double s = std::exp(std::log(0.01) + unit(rng) * std::log(1e4));
            double t = std::exp(std::log(0.01) + unit(rng) * std::log(1e4));
            st.emplace_back(s, t);
        }
        GroupLawReport g = group_laws_report(Endomorphism(m), st);
        CheckReport r;
        r.test_name = "group_laws_" + std::to_string(i);
        r.value_lhs = g.max();
        r.value_rhs = 1e-9;
        r.pass = g.max() <= 1e-9;
        r.seed = seed;
        r.n = st.size();
        out.push_back(r);
    }
    return out;
}

namespace {

CheckReport agreement_row(const std::string& name, double a, double sa, double b, double sb, std::uint64_t seed,
                          std::size_t n)
{
    CheckReport r;
    r.test_name = name;
    r.value_lhs = a;
    r.stderr_lhs = sa;
    r.value_rhs = b;
    r.stderr_rhs = sb;
    r.pass = agree(a, sa, b, sb);
    r.seed = seed;
    r.n = n;
    return r;
}

Matrix rotation(double angle)
{
    Matrix o(2, 2);
    o << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return o;
}

PowerSeries random_series(int dim, int degree, std::mt19937_64& rng, bool unit_constant)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    PowerSeries s(dim, degree);
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) {
            if (i + j == 0)
                continue;
            s.set({i, j}, ComplexRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
        }
    if (unit_constant)
        s.set({0, 0}, ComplexRational(1));
    return s;
}

std::size_t mismatches(const PowerSeries& a, const PowerSeries& b)
{
    std::size_t bad = 0;
    for (const auto& [beta, c] : a.terms())
        bad += !(b.coefficient(beta) == c);
    for (const auto& [beta, c] : b.terms())
        bad += a.coefficient(beta).is_zero() && !c.is_zero();
    return bad;
}

}  // namespace

std::vector<CheckReport> property_suite(std::uint64_t seed, std::size_t samples)
{
    std::vector<CheckReport> out;

    for (const char* name : {"example1", "example2", "example3"}) {
        LatticeFunction phi = load_fixture(name);
        HypothesisReport hyp = check_hypotheses(phi);
        for (std::size_t i = 0; i < hyp.points.size(); ++i) {
            const PointClassification& c = hyp.points[i];
            std::vector<double> e;
            for (int mj : c.m)
                e.push_back(1.0 / (2.0 * mj));
            const Endomorphism ee = Endomorphism::diagonal(e);
            const Box k = Box::cube(phi.dim(), 1.0);
            auto probe = [&](const Polynomial& tail, const Endomorphism& g, int order, const std::string& label) {
                if (tail.empty())
                    return;
                SubhomCandidate q{[&tail](const Vector& x) { return std::complex<double>(tail.eval(x)); }, 2, 1.0};
                SubhomResult res = subhom_check(q, g, k, 0.1, order);
                CheckReport r;
                r.test_name = std::string("subhom_") + label + "_" + name + "_" + std::to_string(i);
                r.value_lhs = res.worst_ratio;
                r.value_rhs = 0.1;
                r.pass = res.pass;
                r.seed = seed;
                out.push_back(r);
            };
            probe(c.Q_tail, ee, 2, "Q_tail");
            probe(c.R_tail, ee.scaled(1.0 / to_double(c.k)), 1, "R_tail");
        }
    }

    {
        auto a = sym_invariance_test(builtin("euclid2"), rotation(0.7), SurfaceRegion::arc(0.1, 1.3), samples, seed);
        a.test_name = "sym_euclid2_rotation";
        out.push_back(a);
        Matrix flip_x = Matrix::Identity(2, 2);
        flip_x(0, 0) = -1.0;
        auto b = sym_invariance_test(p1(), flip_x, SurfaceRegion::quadrant(), samples, seed + 1);
        b.test_name = "sym_p1_reflection";
        out.push_back(b);
        Matrix flip_y = Matrix::Identity(2, 2);
        flip_y(1, 1) = -1.0;
        auto c = sym_invariance_test(p2(), flip_y, SurfaceRegion::quadrant(), samples, seed + 2);
        c.test_name = "sym_p2_reflection";
        out.push_back(c);
    }

    for (const auto& p : {p1(), p2()}) {
        auto upper = sigma(p, SurfaceRegion::halfspace(1, true), samples, seed + 10);
        auto lower = sigma(p, SurfaceRegion::halfspace(1, false), samples, seed + 11);
        auto whole = sigma(p, SurfaceRegion::all(), samples, seed + 12);
        out.push_back(agreement_row("additivity_halves_" + p.name(), upper.value + lower.value,
                                    std::hypot(upper.std_error, lower.std_error), whole.value, whole.std_error, seed,
                                    samples));
        auto a1 = sigma(p, SurfaceRegion::arc(-3.0, 0.5), samples, seed + 13);
        auto a2 = sigma(p, SurfaceRegion::arc(0.5, 2.0), samples, seed + 14);
        auto a12 = sigma(p, SurfaceRegion::arc(-3.0, 2.0), samples, seed + 15);
        out.push_back(agreement_row("additivity_arcs_" + p.name(), a1.value + a2.value,
                                    std::hypot(a1.std_error, a2.std_error), a12.value, a12.std_error, seed, samples));
    }

    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 5; ++trial) {
        PowerSeries s = random_series(2, 8, rng, true);
        PowerSeries u = random_series(2, 8, rng, false);
        CheckReport r;
        r.test_name = "exp_log_roundtrip_" + std::to_string(trial);
        r.value_lhs = static_cast<double>(mismatches(exp_series(log_series(s)), s));
        r.value_rhs = static_cast<double>(mismatches(log_series(exp_series(u)), u));
        r.pass = r.value_lhs == 0.0 && r.value_rhs == 0.0;
        r.seed = seed;
        r.n = s.terms().size();
        out.push_back(r);
    }
    return out;
}

std::vector<CheckReport> vdc_suite(std::uint64_t seed, int instances)
{
    std::vector<OscillatoryInstance> all = random_vdc_instances(instances, seed);
    all.push_back(quadratic_instance(100.0, 1.0, 2.0));
    std::vector<CheckReport> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        VdcReport v = van_der_corput_check(all[i]);
        CheckReport r;
        r.test_name = "vdc_" + all[i].label + "_" + std::to_string(i);
        r.value_lhs = v.integral_abs;
        r.stderr_lhs = v.quad_error;
        r.value_rhs = v.bound;
        r.pass = v.pass;
        r.seed = seed;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------- run

namespace {

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;
    void add(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
};

fs::path output_dir(const ExperimentConfig& cfg)
{
    if (!cfg.out_dir.empty())
        return cfg.out_dir;
    const char* env = std::getenv("ANISO_OUT_DIR");
    fs::path root = env && *env ? fs::path(env) : fs::path("aniso_out");
    return root / cfg.command;
}

std::ofstream open_out(const fs::path& dir, const std::string& name, RunResult& res)
{
    fs::path p = dir / name;
    std::ofstream os(p);
    if (!os)
        throw std::runtime_error("cannot write " + p.string());
    res.artifacts.push_back(p.string());
    return os;
}

// sigma of the Euclidean norm (power) unit level set, when known in closed form
std::optional<double> sigma_reference(const PosHomFunction& p, const std::string& region)
{
    if (region != "all" || p.kind() != HomKind::norm_power)
        return std::nullopt;
    const int d = p.dim();
    const double ball = std::pow(M_PI, d / 2.0) / boost::math::tgamma(d / 2.0 + 1.0);
    return p.order() * ball;
}

void run_sigma(const ExperimentConfig& cfg, const fs::path& dir, RunResult& res, std::ostream& log)
{
    PosHomFunction p = function_from_config(cfg);
    SurfaceRegion f = parse_region(cfg.region);
    SigmaEstimate est = sigma(p, f, cfg.samples, *cfg.seed);
    auto ref = sigma_reference(p, cfg.region);
    bool pass = !ref || std::abs(est.value - *ref) <= 3.0 * est.std_error + 1e-12;
    auto os = open_out(dir, "sigma.csv", res);
    os << "function,region,value,std_error,samples,seed,reference,pass\n";
    os << p.name() << ',' << cfg.region << ',' << format_double(est.value) << ',' << format_double(est.std_error)
       << ',' << est.samples << ',' << est.seed << ',' << (ref ? format_double(*ref) : std::string("")) << ','
       << (pass ? "true" : "false") << '\n';
    log << "sigma(" << p.name() << ", " << cfg.region << ") = " << format_double(est.value) << " +- "
        << format_double(est.std_error);
    if (ref)
        log << "  reference " << format_double(*ref);
    log << '\n';
    if (!pass)
        res.failures.push_back("sigma differs from its closed form by more than 3 stderr");
}

void run_integrate(const ExperimentConfig& cfg, const fs::path& dir, RunResult& res, std::ostream& log)
{
    PosHomFunction p = function_from_config(cfg);
    auto f = [&p](const Vector& x) { return std::exp(-p.eval(x)); };
    const double cutoff = 40.0;
    Estimate polar = polar_integrate(p, f, cutoff, cfg.samples, *cfg.seed);
    Estimate direct = direct_integrate(p, f, cutoff, cfg.samples, *cfg.seed + 1);
    CheckReport r = agreement_row("exp_minus_P_" + p.name(), polar.value, polar.std_error, direct.value,
                                  direct.std_error, *cfg.seed, cfg.samples);
    auto os = open_out(dir, "integrate.csv", res);
    write_csv(os, {r});
    log << "polar " << format_double(polar.value) << " +- " << format_double(polar.std_error) << ", direct "
        << format_double(direct.value) << " +- " << format_double(direct.std_error) << '\n';
    if (!r.pass)
        res.failures.push_back("polar and direct integrals disagree");
}

void run_classify(const ExperimentConfig& cfg, const fs::path& dir, RunResult& res, std::ostream& log)
{
    LatticeFunction phi = load_fixture(cfg.fixture);
    MaxModulusSet omega = find_omega(phi);
    std::vector<PointClassification> points;
    for (const auto& pt : omega.points)
        points.push_back(classify_point(phi, pt.xi));
    auto os = open_out(dir, "omega.csv", res);
    for (int j = 0; j < phi.dim(); ++j)
        os << "xi_" << j + 1 << ',';
    os << "residual,type,mu\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (int j = 0; j < phi.dim(); ++j)
            os << format_double(omega.points[i].xi(j)) << ',';
        os << format_double(omega.points[i].residual) << ',' << to_string(points[i].type) << ','
           << to_string(points[i].mu) << '\n';
    }
    auto cs = open_out(dir, "classification.txt", res);
    for (const auto& c : points) {
        write_classification(cs, c);
        cs << '\n';
    }
    bool all = std::all_of(points.begin(), points.end(),
                           [](const PointClassification& c) { return c.type != PointType::unclassified; });
    log << cfg.fixture << ": " << points.size() << " maxima";
    if (all)
        log << ", mu_phi = " << to_string(mu_phi(points));
    log << '\n';
    for (const auto& c : points)
        log << "  (" << format_double(c.xi0(0)) << ", " << format_double(c.xi0(c.xi0.size() - 1)) << ") "
            << to_string(c.type) << " mu = " << to_string(c.mu) << '\n';
    if (!all)
        res.failures.push_back("a maximum could not be classified");
}

void run_decay(const ExperimentConfig& cfg, const fs::path& dir, RunResult& res, std::ostream& log)
{
    LatticeFunction phi = load_fixture(cfg.fixture);
    HypothesisReport hyp = check_hypotheses(phi);
    if (!hyp.pass) {
        log << "hypotheses fail: " << hyp.reason << '\n';
        res.failures.push_back("hypotheses: " + hyp.reason);
        return;
    }
    const double mu = to_double(hyp.mu);
    std::vector<int> schedule = log_schedule(cfg.n_min, cfg.n_max);
    PowerMethod method = cfg.method == "direct" ? PowerMethod::direct : PowerMethod::fft;
    auto records = decay_curve(phi, IntegerBox::cube(phi.dim(), cfg.k_half), schedule, method, {}, false);
    {
        auto os = open_out(dir, "decay.csv", res);
        write_decay_csv(os, records, mu, cfg.timing);
    }
    {
        auto os = open_out(dir, "decay.gp", res);
        write_decay_plot(os, "decay.csv", mu, cfg.fixture);
    }
    SlopeFit fit = slope_fit(records);
    BoundCheck bound = theorem_bound_check(records, mu);
    const bool slope_ok = std::abs(fit.slope + mu) <= 0.05;
    auto os = open_out(dir, "slope.txt", res);
    os << "slope=" << format_double(fit.slope) << "\nstd_error=" << format_double(fit.std_error)
       << "\npoints=" << fit.points << "\nmu_phi=" << to_string(hyp.mu) << "\nslope_within_0.05="
       << (slope_ok ? "true" : "false") << "\nc_hat=" << format_double(bound.c_hat)
       << "\nearly_max=" << format_double(bound.early_max) << "\nbound_check=" << (bound.pass ? "true" : "false")
       << '\n';
    log << cfg.fixture << ": slope " << std::fixed << std::setprecision(4) << fit.slope << " (target "
        << -mu << "), C_hat " << bound.c_hat << '\n';
    log.unsetf(std::ios::floatfield);
    if (!slope_ok)
        res.failures.push_back("slope outside -mu +- 0.05");
    if (!bound.pass)
        res.failures.push_back("decay bound check failed");
}

void run_checks(const ExperimentConfig& cfg, const fs::path& dir, RunResult& res, std::ostream& log)
{
    std::vector<CheckReport> rows;
    auto append = [&rows](std::vector<CheckReport> more) { rows.insert(rows.end(), more.begin(), more.end()); };
    if (cfg.suite == "group_laws" || cfg.suite == "all")
        append(group_law_suite(*cfg.seed));
    if (cfg.suite == "properties" || cfg.suite == "all")
        append(property_suite(*cfg.seed, std::min<std::size_t>(cfg.samples, 200000)));
    if (cfg.suite == "vdc" || cfg.suite == "all")
        append(vdc_suite(*cfg.seed));
    auto os = open_out(dir, "checks.csv", res);
    write_csv(os, rows);
    std::size_t failed = 0;
    for (const auto& r : rows)
        if (!r.pass) {
            ++failed;
            res.failures.push_back(r.test_name);
        }
    log << cfg.suite << ": " << rows.size() - failed << "/" << rows.size() << " checks pass\n";
}

std::string timestamp()
{
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg, std::ostream& log)
{
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = output_dir(cfg);
    fs::create_directories(dir);
    RunResult res;
    if (cfg.command == "sigma")
        run_sigma(cfg, dir, res, log);
    else if (cfg.command == "integrate")
        run_integrate(cfg, dir, res, log);
    else if (cfg.command == "classify")
        run_classify(cfg, dir, res, log);
    else if (cfg.command == "decay")
        run_decay(cfg, dir, res, log);
    else
        run_checks(cfg, dir, res, log);
    res.exit_code = res.failures.empty() ? 0 : 1;
    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    Manifest m;
    m.add("command", cfg.command);
    m.add("seed", cfg.seed ? std::to_string(*cfg.seed) : "none");
    if (is_one_of(cfg.command, {"sigma", "integrate"})) {
        m.add("function", cfg.semi_elliptic_terms.empty() ? cfg.function : cfg.semi_elliptic_terms);
        m.add("region", cfg.region);
        m.add("samples", std::to_string(cfg.samples));
        if (!cfg.exponent.empty()) {
            std::ostringstream e;
            for (double v : cfg.exponent)
                e << format_double(v) << ' ';
            m.add("exponent", e.str());
        }
    }
    if (is_one_of(cfg.command, {"classify", "decay"}))
        m.add("fixture", resolve_fixture(cfg.fixture));
    if (cfg.command == "decay") {
        m.add("K", std::to_string(cfg.k_half));
        m.add("nmin", std::to_string(cfg.n_min));
        m.add("nmax", std::to_string(cfg.n_max));
        m.add("method", cfg.method);
    }
    if (cfg.command == "checks")
        m.add("suite", cfg.suite);
    m.add("version", kVersion);
    m.add("compiler", __VERSION__);
    m.add("boost", BOOST_LIB_VERSION);
    m.add("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION));
    m.add("fftw", fftw_version);
    m.add("started", timestamp());
    m.add("wall_time_ms", format_double(std::round(wall * 1000.0) / 1000.0));
    m.add("exit_code", std::to_string(res.exit_code));
    for (const auto& f : res.failures)
        m.add("failure", f);
    for (const auto& a : res.artifacts)
        m.add("artifact", fs::path(a).filename().string());
    std::ofstream ms(dir / "manifest.txt");
    for (const auto& [k, v] : m.entries)
        ms << k << " = " << v << '\n';
    res.artifacts.push_back((dir / "manifest.txt").string());
    return res;
}

}  // namespace aniso
