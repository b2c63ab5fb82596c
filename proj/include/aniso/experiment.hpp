#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aniso/homogeneous.hpp"
#include "aniso/lattice.hpp"
#include "aniso/measure.hpp"
#include "aniso/report.hpp"

namespace aniso {

// Raised for anything that makes a run ill-posed; the CLI maps it to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string command;           // sigma | integrate | classify | decay | checks
    std::string function = "euclid2";
    std::string semi_elliptic_terms;  // "2,0:1 0,4:1" overrides `function` when set
    std::string semi_elliptic_weights;
    std::vector<double> exponent;  // row-major; empty keeps the designated E
    std::string region = "all";
    std::string fixture;
    int k_half = 64;
    int n_min = 16;
    int n_max = 1024;
    std::size_t samples = default_samples;
    std::optional<std::uint64_t> seed;
    std::string method = "fft";
    bool timing = false;
    std::string suite = "all";     // group_laws | properties | vdc | all
    std::string out_dir;
};

// [run] command seed out samples suite, [function] name weights terms exponent,
// [region] spec, [lattice] fixture K nmin nmax method timing.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// Throws ConfigError.
void validate(const ExperimentConfig& cfg);

// A path ending in .lat is used as is, otherwise data/fixtures/<name>.lat
// under ANISO_DATA_DIR.
std::string resolve_fixture(const std::string& name);
LatticeFunction load_fixture(const std::string& name);

PosHomFunction function_from_config(const ExperimentConfig& cfg);
// all | none | quadrant | half:<axis>[+-] | arc:<lo>:<hi>
SurfaceRegion parse_region(const std::string& spec);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> artifacts;
    std::vector<std::string> failures;
};

// Writes CSVs, a gnuplot script for decay runs and manifest.txt into the
// output directory.
RunResult run(const ExperimentConfig& cfg, std::ostream& log);

// Check suites shared by the CLI and the tests.
std::vector<CheckReport> group_law_suite(std::uint64_t seed, int endomorphisms = 20, int pairs = 20);
std::vector<CheckReport> property_suite(std::uint64_t seed, std::size_t samples = 200000);
std::vector<CheckReport> vdc_suite(std::uint64_t seed, int instances = 50);

}  // namespace aniso
