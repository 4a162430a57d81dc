#pragma once

#include "moldmpc/plant/convection.hpp"
#include "moldmpc/plant/curing.hpp"

#include <optional>
#include <vector>

namespace moldmpc
{

struct MaterialProps
{
    double density = 7850.0;      // kg/m^3
    double specific_heat = 520.0; // J/(kg K)
    double conductivity = 34.0;   // W/(m K)
    double conductivity_min = 33.0;
    double conductivity_max = 35.5;

    void validate() const;
};

/// Structured grid over the mold. Blocks are stacked along z; block 0 is the
/// lower half. Cell (i, j, k) has i along x, j along y and k along z, with
/// k in [0, nz_per_block * blocks).
struct GridSpec
{
    int nx = 10;
    int ny = 8;
    int nz_per_block = 4;
    int blocks = 2;
    double length_x = 0.5;         // m
    double length_y = 0.4;         // m
    double block_thickness = 0.04; // m

    int nz() const { return nz_per_block * blocks; }
    int cell_count() const { return nx * ny * nz(); }
    double dx() const { return length_x / nx; }
    double dy() const { return length_y / ny; }
    double dz() const { return block_thickness / nz_per_block; }
};

struct CellCoord
{
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

struct InsulationPanel
{
    double thickness = 0.006;   // m
    double conductivity = 0.53; // W/(m K)
};

/// Exterior losses. When `constant_h` is set every exterior face uses that
/// coefficient instead of the fitted laws (0 gives an adiabatic plant).
struct ConvectionSpec
{
    ConvectionFit upper = upper_face_fit();
    ConvectionFit lower = lower_face_fit();
    ConvectionFit lateral = lateral_face_fit();
    InsulationPanel top_bottom_insulation{0.006, 0.53};
    InsulationPanel lateral_insulation{0.007, 0.26};
    std::optional<double> constant_h;
};

/// Rectangular cavity footprint between the two blocks, in cell columns
/// [i_begin, i_end) x [j_begin, j_end). Inside it the blocks exchange heat
/// through the cavity gap conductance; outside it they are in direct contact.
struct CavitySpec
{
    int i_begin = 1;
    int i_end = 9;
    int j_begin = 1;
    int j_end = 7;
    double gap_conductance = 70.0; // W/(m^2 K)
    double thickness = 0.003;      // m
};

struct HeaterSpec
{
    int id = 0;
    std::vector<CellCoord> footprint;
    double max_power = 0.0; // W
};

struct SensorLayout
{
    std::vector<CellCoord> control;
    std::vector<CellCoord> auxiliary;
};

struct CuringModel
{
    bool enabled = false;
    double injection_time = 0.0; // s; resin is absent (no reaction) before this
    std::vector<CellCoord> resin_columns; // (i, j) cavity columns, k ignored
    CuringParameters parameters;
};

struct PlantConfig
{
    GridSpec grid;
    MaterialProps material;
    ConvectionSpec convection;
    CavitySpec cavity;
    std::vector<HeaterSpec> heaters;
    SensorLayout sensors;
    CuringModel curing;
    double ambient = 296.15;       // K
    double sensor_noise_std = 0.0; // K
    double max_substep = 10.0;     // s, internal step used by advance()
};

/// The reference two-block mold: 10x8x4 cells per block, 16 cartridges in two
/// rows of four per block, four lateral belts, 6 control and 8 auxiliary
/// cavity sensors.
PlantConfig default_plant_config();

/// Single-cell configuration with one heater, useful as a lumped-capacitance
/// limit. `volume` in m^3 is split as a cube.
PlantConfig lumped_plant_config(double volume, double max_power);

/// Heater pairs that are mirror images in the default layout (1-based ids).
std::vector<std::pair<int, int>> default_symmetry_pairs();

} // namespace moldmpc
