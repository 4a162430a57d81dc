#pragma once

#include "moldmpc/common.hpp"

#include <filesystem>
#include <iosfwd>

namespace moldmpc
{

/// Sampled input/output record used for identification. Rows are samples;
/// U holds heater powers in W, Y holds temperatures in C. When auxiliary
/// outputs are present they follow the control outputs in Y.
struct IoDataset
{
    double sample_period = 200.0;
    Vector time; // s
    Matrix U;
    Matrix Y;
    int control_outputs = 6;

    Eigen::Index rows() const { return U.rows(); }
    bool has_auxiliary() const { return Y.cols() > control_outputs; }
    void validate() const;

    /// Rows [begin, end) as a new dataset.
    IoDataset slice(Eigen::Index begin, Eigen::Index end) const;
    /// Control outputs only.
    IoDataset control_only() const;
};

/// CSV with header `time_s,u1..uN,y1..yM[,aux1..auxK]`.
void write_dataset_csv(const IoDataset& data, std::ostream& out);
void write_dataset_csv(const IoDataset& data, const std::filesystem::path& path);
IoDataset read_dataset_csv(std::istream& in);
IoDataset read_dataset_csv(const std::filesystem::path& path);

} // namespace moldmpc
