#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moldmpc::csv
{

/// Numeric table with a header row. Empty fields and "nan" parse as NaN.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 when absent
};

/// Formats with 17 significant digits so that values round-trip exactly.
std::string format_number(double value);

void write_row(std::ostream& out, const std::vector<std::string>& fields);
void write_row(std::ostream& out, const std::vector<double>& values);

Table read_table(std::istream& in);

} // namespace moldmpc::csv
