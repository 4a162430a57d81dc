#pragma once

#include "moldmpc/harness/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace moldmpc
{

/// Run CSV header: time_s, ref_C, y1..y6_C, aux1..aux8_C, vhat1..vhat8_C,
/// u1..u20_W, p1..p6_hat, cost. Missing values are written as "nan".
std::vector<std::string> run_csv_header();

void write_run_csv(const RunRecord& record, std::ostream& out);
/// Reads the columns of the run schema back. Cure degree, solver iterations
/// and statuses are not part of the file and come back as NaN / empty.
RunRecord read_run_csv(std::istream& in);
RunRecord read_run_csv(const std::filesystem::path& path);

/// Writes `<stem>.csv` (the run) and three plot-data files next to it:
/// `<stem>_tracking.csv` (reference against sensor mean, min and max),
/// `<stem>_spread.csv` (each sensor minus the sensor mean from t_i on) and
/// `<stem>_power.csv` (commands as a fraction of each heater limit).
/// `sensors` selects the temperatures used: all 14, or the 6 control ones.
enum class SensorSet
{
    All,
    Control
};

void export_run(const RunRecord& record, const std::filesystem::path& dir, const std::string& stem, SensorSet sensors,
                double t_i, const Vector& max_powers);

Matrix sensor_columns(const RunRecord& record, SensorSet sensors);

void write_indicator_table(const std::vector<ComparisonRow>& rows, std::ostream& out);
/// comparison.csv plus one set of run files per row.
void export_comparison(const Comparison& comparison, const ExperimentConfig& config,
                       const std::filesystem::path& dir);

} // namespace moldmpc
