#include "moldmpc/csv.hpp"

#include "moldmpc/common.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace moldmpc::csv
{

int Table::column(const std::string& name) const
{
    for (size_t c = 0; c < header.size(); ++c)
        if (header[c] == name)
            return static_cast<int>(c);
    return -1;
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
    for (size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
            out << ',';
        out << fields[i];
    }
    out << '\n';
}

void write_row(std::ostream& out, const std::vector<double>& values)
{
    for (size_t i = 0; i < values.size(); ++i)
    {
        if (i)
            out << ',';
        out << format_number(values[i]);
    }
    out << '\n';
}

namespace
{

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ','))
    {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
            field.pop_back();
        while (!field.empty() && field.front() == ' ')
            field.erase(field.begin());
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, size_t line_no)
{
    if (text.empty() || text == "nan" || text == "NaN")
        return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc() || result.ptr != text.data() + text.size())
        throw InputError("csv line " + std::to_string(line_no) + ": cannot parse '" + text + "'");
    return value;
}

} // namespace

Table read_table(std::istream& in)
{
    Table table;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        if (table.header.empty())
        {
            table.header = split(line);
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != table.header.size())
            throw InputError("csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_number(f, line_no));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw InputError("csv: missing header row");
    return table;
}

} // namespace moldmpc::csv
