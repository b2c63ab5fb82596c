#include "aniso/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <boost/random/sobol.hpp>

namespace aniso {

ScrambledSobol::ScrambledSobol(int dim, std::uint64_t seed) : dim_(dim), shift_(dim)
{
    if (dim <= 0)
        throw std::invalid_argument("sobol dimension must be positive");
    std::mt19937_64 rng(seed);
    for (auto& s : shift_)
        s = rng();
}

void ScrambledSobol::block(std::uint64_t first, std::size_t count, std::vector<double>& out) const
{
    boost::random::sobol engine(dim_);
    engine.seed(first);
    out.resize(count * dim_);
    for (std::size_t i = 0; i < count; ++i)
        for (int j = 0; j < dim_; ++j) {
            std::uint64_t v = static_cast<std::uint64_t>(engine()) ^ shift_[j];
            // top 53 bits, centred in their cell
            out[i * dim_ + j] = (static_cast<double>(v >> 11) + 0.5) * 0x1p-53;
        }
}

unsigned worker_count()
{
    if (const char* env = std::getenv("ANISO_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& fn)
{
    unsigned workers = std::min<std::size_t>(worker_count(), blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b)
            fn(b);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t b = w; b < blocks; b += workers)
                    fn(b);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<Eigen::VectorXd> sphere_grid(int dim, std::size_t count, std::uint64_t seed)
{
    std::vector<Eigen::VectorXd> pts;
    if (dim == 1) {
        pts.push_back(Eigen::VectorXd::Constant(1, -1.0));
        pts.push_back(Eigen::VectorXd::Constant(1, 1.0));
        return pts;
    }
    pts.reserve(count);
    if (dim == 2) {
        double off = 0.5;
        if (seed != 0) {
            std::mt19937_64 rng(seed);
            off = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        }
        for (std::size_t k = 0; k < count; ++k) {
            double a = 2.0 * M_PI * (k + off) / count;
            Eigen::VectorXd v(2);
            v << std::cos(a), std::sin(a);
            pts.push_back(v);
        }
        return pts;
    }
    if (dim == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (std::size_t k = 0; k < count; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / count;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = golden * k + 0.1 * static_cast<double>(seed % 1000);
            Eigen::VectorXd v(3);
            v << rho * std::cos(a), rho * std::sin(a), z;
            pts.push_back(v);
        }
        return pts;
    }
    ScrambledSobol qmc(dim, seed);
    std::vector<double> u;
    qmc.block(0, count, u);
    boost::math::normal normal;
    for (std::size_t k = 0; k < count; ++k) {
        Eigen::VectorXd v(dim);
        for (int j = 0; j < dim; ++j)
            v(j) = boost::math::quantile(normal, u[k * dim + j]);
        pts.push_back(v.normalized());
    }
    return pts;
}

std::vector<Eigen::VectorXd> box_grid(int dim, double lo, double hi, int per_axis)
{
    std::vector<Eigen::VectorXd> pts;
    std::vector<int> idx(dim, 0);
    while (true) {
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i)
            x(i) = per_axis == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[i] / (per_axis - 1);
        pts.push_back(x);
        int i = 0;
        while (i < dim && ++idx[i] == per_axis)
            idx[i++] = 0;
        if (i == dim)
            break;
    }
    return pts;
}

}  // namespace aniso
