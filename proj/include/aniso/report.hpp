#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace aniso {

// One row of a two-sided identity check.
struct CheckReport {
    std::string test_name;
    double value_lhs = 0.0;
    double value_rhs = 0.0;
    double stderr_lhs = 0.0;
    double stderr_rhs = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

const char* check_csv_header();
void write_csv_row(std::ostream& os, const CheckReport& r);
void write_csv(std::ostream& os, const std::vector<CheckReport>& rows);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace aniso
