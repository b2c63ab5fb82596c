#include "aniso/report.hpp"

#include <charconv>

namespace aniso {

const char* check_csv_header()
{
    return "test_name,value_lhs,value_rhs,stderr_lhs,stderr_rhs,pass,seed,n";
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& os, const CheckReport& r)
{
    os << r.test_name << ',' << format_double(r.value_lhs) << ',' << format_double(r.value_rhs) << ','
       << format_double(r.stderr_lhs) << ',' << format_double(r.stderr_rhs) << ',' << (r.pass ? 1 : 0) << ','
       << r.seed << ',' << r.n << '\n';
}

void write_csv(std::ostream& os, const std::vector<CheckReport>& rows)
{
    os << check_csv_header() << '\n';
    for (const auto& r : rows)
        write_csv_row(os, r);
}

}  // namespace aniso
