#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace aniso {

// Sobol points in [0,1)^d with a seed-derived random digital shift.
// Points are addressed by index, so any block of the sequence can be
// generated independently.
class ScrambledSobol {
public:
    ScrambledSobol(int dim, std::uint64_t seed);

    int dim() const { return dim_; }
    // Fills out (count x dim, row-major) with points first .. first+count-1.
    void block(std::uint64_t first, std::size_t count, std::vector<double>& out) const;

private:
    int dim_;
    std::vector<std::uint64_t> shift_;
};

// Worker count: ANISO_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs fn(b) for b in [0, blocks) over worker_count() threads. Each block
// writes only its own slot, so results never depend on scheduling.
void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& fn);

// Deterministic low-discrepancy points on the Euclidean unit sphere S^{d-1}.
std::vector<Eigen::VectorXd> sphere_grid(int dim, std::size_t count, std::uint64_t seed = 0);

// Regular tensor grid over [lo, hi]^d with n points per axis.
std::vector<Eigen::VectorXd> box_grid(int dim, double lo, double hi, int per_axis);

}  // namespace aniso
