#include "moldmpc/harness/export.hpp"

#include "moldmpc/csv.hpp"

#include <fstream>
#include <limits>

namespace moldmpc
{

namespace
{

constexpr int kControl = 6;
constexpr int kAuxiliary = 8;
constexpr int kHeaters = 20;
constexpr int kPerturbations = 6;

std::vector<std::string> numbered(const std::string& prefix, int count, const std::string& suffix)
{
    std::vector<std::string> names;
    for (int i = 1; i <= count; ++i)
        names.push_back(prefix + std::to_string(i) + suffix);
    return names;
}

// Value (r, c) of a block that may be narrower or shorter than the schema.
double cell(const Matrix& m, Eigen::Index r, int c)
{
    if (r < m.rows() && c < m.cols())
        return m(r, c);
    return std::numeric_limits<double>::quiet_NaN();
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot open " + path.string() + " for writing");
    return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path)
{
    if (!out)
        throw InputError("failed writing " + path.string());
}

} // namespace

std::vector<std::string> run_csv_header()
{
    std::vector<std::string> header{"time_s", "ref_C"};
    for (const auto& group : {numbered("y", kControl, "_C"), numbered("aux", kAuxiliary, "_C"),
                              numbered("vhat", kAuxiliary, "_C"), numbered("u", kHeaters, "_W"),
                              numbered("p", kPerturbations, "_hat")})
        header.insert(header.end(), group.begin(), group.end());
    header.push_back("cost");
    return header;
}

void write_run_csv(const RunRecord& record, std::ostream& out)
{
    csv::write_row(out, run_csv_header());
    std::vector<double> row;
    for (Eigen::Index k = 0; k < record.rows(); ++k)
    {
        row.clear();
        row.push_back(record.time(k));
        row.push_back(record.reference(k));
        for (int c = 0; c < kControl; ++c)
            row.push_back(cell(record.control, k, c));
        for (int c = 0; c < kAuxiliary; ++c)
            row.push_back(cell(record.auxiliary, k, c));
        for (int c = 0; c < kAuxiliary; ++c)
            row.push_back(cell(record.virtual_nodes, k, c));
        for (int c = 0; c < kHeaters; ++c)
            row.push_back(cell(record.power, k, c));
        for (int c = 0; c < kPerturbations; ++c)
            row.push_back(cell(record.perturbations, k, c));
        row.push_back(k < record.cost.size() ? record.cost(k) : std::numeric_limits<double>::quiet_NaN());
        csv::write_row(out, row);
    }
}

RunRecord read_run_csv(std::istream& in)
{
    const csv::Table table = csv::read_table(in);
    if (table.header != run_csv_header())
        throw InputError("run csv: header does not match the run schema");
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    RunRecord record;
    record.time.resize(n);
    record.reference.resize(n);
    record.control.resize(n, kControl);
    record.auxiliary.resize(n, kAuxiliary);
    record.virtual_nodes.resize(n, kAuxiliary);
    record.power.resize(n, kHeaters);
    record.perturbations.resize(n, kPerturbations);
    record.cost.resize(n);
    record.min_cure = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const auto& row = table.rows[static_cast<size_t>(k)];
        size_t c = 0;
        record.time(k) = row[c++];
        record.reference(k) = row[c++];
        for (int j = 0; j < kControl; ++j)
            record.control(k, j) = row[c++];
        for (int j = 0; j < kAuxiliary; ++j)
            record.auxiliary(k, j) = row[c++];
        for (int j = 0; j < kAuxiliary; ++j)
            record.virtual_nodes(k, j) = row[c++];
        for (int j = 0; j < kHeaters; ++j)
            record.power(k, j) = row[c++];
        for (int j = 0; j < kPerturbations; ++j)
            record.perturbations(k, j) = row[c++];
        record.cost(k) = row[c++];
        if (k > 0 && !(record.time(k) > record.time(k - 1)))
            throw InputError("run csv: time is not increasing at row " + std::to_string(k + 1));
    }
    return record;
}

RunRecord read_run_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open run file " + path.string());
    return read_run_csv(in);
}

Matrix sensor_columns(const RunRecord& record, SensorSet sensors)
{
    return sensors == SensorSet::All ? record.all_sensors() : record.control;
}

void export_run(const RunRecord& record, const std::filesystem::path& dir, const std::string& stem, SensorSet sensors,
                double t_i, const Vector& max_powers)
{
    std::filesystem::create_directories(dir);
    const Matrix temps = sensor_columns(record, sensors);
    const auto n_sensors = static_cast<int>(temps.cols());

    const auto run_path = dir / (stem + ".csv");
    auto run = open_output(run_path);
    write_run_csv(record, run);
    check_written(run, run_path);

    const auto tracking_path = dir / (stem + "_tracking.csv");
    auto tracking = open_output(tracking_path);
    csv::write_row(tracking, std::vector<std::string>{"time_s", "ref_C", "mean_C", "min_C", "max_C"});
    for (Eigen::Index k = 0; k < record.rows(); ++k)
        csv::write_row(tracking, std::vector<double>{record.time(k), record.reference(k), temps.row(k).mean(),
                                                     temps.row(k).minCoeff(), temps.row(k).maxCoeff()});
    check_written(tracking, tracking_path);

    const auto spread_path = dir / (stem + "_spread.csv");
    auto spread = open_output(spread_path);
    std::vector<std::string> spread_header{"time_s"};
    for (const auto& name : numbered("dT", n_sensors, "_C"))
        spread_header.push_back(name);
    csv::write_row(spread, spread_header);
    for (Eigen::Index k = 0; k < record.rows(); ++k)
    {
        if (record.time(k) < t_i)
            continue;
        std::vector<double> row{record.time(k)};
        const double mean = temps.row(k).mean();
        for (int c = 0; c < n_sensors; ++c)
            row.push_back(temps(k, c) - mean);
        csv::write_row(spread, row);
    }
    check_written(spread, spread_path);

    const auto power_path = dir / (stem + "_power.csv");
    auto power = open_output(power_path);
    std::vector<std::string> power_header{"time_s"};
    for (const auto& name : numbered("u", kHeaters, "_frac"))
        power_header.push_back(name);
    csv::write_row(power, power_header);
    for (Eigen::Index k = 0; k < record.rows(); ++k)
    {
        std::vector<double> row{record.time(k)};
        for (int c = 0; c < kHeaters; ++c)
            row.push_back(c < max_powers.size() ? cell(record.power, k, c) / max_powers(c)
                                                : std::numeric_limits<double>::quiet_NaN());
        csv::write_row(power, row);
    }
    check_written(power, power_path);
}

void write_indicator_table(const std::vector<ComparisonRow>& rows, std::ostream& out)
{
    csv::write_row(out, std::vector<std::string>{"controller", "rmse_avg_stat_C", "rmse_ref_stat_C",
                                                 "rmse_avg_global_C", "rmse_ref_global_C", "t_i_s", "t_f_s",
                                                 "sensors"});
    for (const auto& row : rows)
    {
        const auto& r = row.report;
        csv::write_row(out, std::vector<std::string>{
                                row.name, csv::format_number(r.rmse_avg_stat), csv::format_number(r.rmse_ref_stat),
                                csv::format_number(r.rmse_avg_global), csv::format_number(r.rmse_ref_global),
                                csv::format_number(r.t_i), csv::format_number(r.t_f), std::to_string(r.sensors)});
    }
}

void export_comparison(const Comparison& comparison, const ExperimentConfig& config,
                       const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto table_path = dir / "comparison.csv";
    auto table = open_output(table_path);
    write_indicator_table(comparison.rows, table);
    check_written(table, table_path);

    Vector max_powers(static_cast<Eigen::Index>(config.plant.heaters.size()));
    for (size_t h = 0; h < config.plant.heaters.size(); ++h)
        max_powers(static_cast<Eigen::Index>(h)) = config.plant.heaters[h].max_power;
    for (size_t i = 0; i < comparison.runs.size() && i < comparison.rows.size(); ++i)
    {
        const bool molding = comparison.rows[i].name == "molding";
        export_run(comparison.runs[i], dir, comparison.rows[i].name, molding ? SensorSet::Control : SensorSet::All,
                   comparison.rows[i].report.t_i, max_powers);
    }
}

} // namespace moldmpc
