#include "moldmpc/plant/io_dataset.hpp"

#include "moldmpc/csv.hpp"

#include <fstream>
#include <sstream>

namespace moldmpc
{

void IoDataset::validate() const
{
    if (!(sample_period > 0.0))
        throw InputError("dataset: sample period must be positive");
    if (U.rows() != Y.rows() || time.size() != U.rows())
        throw InputError("dataset: U, Y and time must have equal row counts");
    if (control_outputs > Y.cols())
        throw InputError("dataset: control output count exceeds Y columns");
}

IoDataset IoDataset::slice(Eigen::Index begin, Eigen::Index end) const
{
    if (begin < 0 || end > rows() || begin > end)
        throw InputError("dataset: slice out of range");
    IoDataset out;
    out.sample_period = sample_period;
    out.control_outputs = control_outputs;
    out.time = time.segment(begin, end - begin);
    out.U = U.middleRows(begin, end - begin);
    out.Y = Y.middleRows(begin, end - begin);
    return out;
}

IoDataset IoDataset::control_only() const
{
    IoDataset out = *this;
    out.Y = Y.leftCols(control_outputs);
    return out;
}

void write_dataset_csv(const IoDataset& data, std::ostream& out)
{
    data.validate();
    std::vector<std::string> header{"time_s"};
    for (Eigen::Index c = 0; c < data.U.cols(); ++c)
        header.push_back("u" + std::to_string(c + 1));
    for (int c = 0; c < data.control_outputs; ++c)
        header.push_back("y" + std::to_string(c + 1));
    for (Eigen::Index c = data.control_outputs; c < data.Y.cols(); ++c)
        header.push_back("aux" + std::to_string(c - data.control_outputs + 1));
    csv::write_row(out, header);

    std::vector<double> row;
    for (Eigen::Index t = 0; t < data.rows(); ++t)
    {
        row.clear();
        row.push_back(data.time(t));
        for (Eigen::Index c = 0; c < data.U.cols(); ++c)
            row.push_back(data.U(t, c));
        for (Eigen::Index c = 0; c < data.Y.cols(); ++c)
            row.push_back(data.Y(t, c));
        csv::write_row(out, row);
    }
}

void write_dataset_csv(const IoDataset& data, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_dataset_csv(data, out);
}

IoDataset read_dataset_csv(std::istream& in)
{
    const csv::Table table = csv::read_table(in);
    std::vector<int> u_cols, y_cols, aux_cols;
    int time_col = -1;
    for (int c = 0; c < static_cast<int>(table.header.size()); ++c)
    {
        const std::string& name = table.header[c];
        if (name == "time_s")
            time_col = c;
        else if (name.rfind("aux", 0) == 0)
            aux_cols.push_back(c);
        else if (name.rfind("u", 0) == 0)
            u_cols.push_back(c);
        else if (name.rfind("y", 0) == 0)
            y_cols.push_back(c);
        else
            throw InputError("dataset csv: unexpected column '" + name + "'");
    }
    if (time_col < 0)
        throw InputError("dataset csv: missing time_s column");

    IoDataset data;
    const auto rows = static_cast<Eigen::Index>(table.rows.size());
    data.control_outputs = static_cast<int>(y_cols.size());
    data.time.resize(rows);
    data.U.resize(rows, static_cast<Eigen::Index>(u_cols.size()));
    data.Y.resize(rows, static_cast<Eigen::Index>(y_cols.size() + aux_cols.size()));
    for (Eigen::Index t = 0; t < rows; ++t)
    {
        const auto& r = table.rows[t];
        data.time(t) = r[time_col];
        for (size_t c = 0; c < u_cols.size(); ++c)
            data.U(t, c) = r[u_cols[c]];
        for (size_t c = 0; c < y_cols.size(); ++c)
            data.Y(t, c) = r[y_cols[c]];
        for (size_t c = 0; c < aux_cols.size(); ++c)
            data.Y(t, y_cols.size() + c) = r[aux_cols[c]];
    }
    if (rows >= 2)
        data.sample_period = data.time(1) - data.time(0);
    data.validate();
    return data;
}

IoDataset read_dataset_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return read_dataset_csv(in);
}

} // namespace moldmpc
