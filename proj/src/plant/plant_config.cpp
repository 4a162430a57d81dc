#include "moldmpc/plant/plant_config.hpp"

#include "moldmpc/common.hpp"

#include <array>
#include <cmath>

namespace moldmpc
{

void MaterialProps::validate() const
{
    if (!(density > 0.0 && specific_heat > 0.0 && conductivity > 0.0))
        throw ConfigError("material: density, specific heat and conductivity must be positive");
    if (!(conductivity_min <= conductivity && conductivity <= conductivity_max))
        throw ConfigError("material: conductivity outside its declared band");
}

namespace
{

// Heater layer of each block, counted from the bottom of the stack.
constexpr int kLowerHeaterLayer = 1;
constexpr int kUpperHeaterLayer = 6;

// Cartridge x-positions (pairs of cell columns) and the two rows in y.
constexpr std::array<std::array<int, 2>, 4> kCartridgeColumns{{{1, 2}, {3, 4}, {5, 6}, {7, 8}}};
constexpr std::array<std::array<int, 3>, 2> kCartridgeRows{{{1, 2, 3}, {4, 5, 6}}};

HeaterSpec cartridge(int id, int layer, int row, int position)
{
    HeaterSpec h;
    h.id = id;
    h.max_power = 500.0;
    for (int i : kCartridgeColumns[position])
        for (int j : kCartridgeRows[row])
            h.footprint.push_back({i, j, layer});
    return h;
}

} // namespace

PlantConfig default_plant_config()
{
    PlantConfig cfg;
    const GridSpec& g = cfg.grid;

    // Each block: row A numbered left to right, row B right to left, so that
    // heater n and heater (block_base + 9 - n) are mirror images about y = L/2.
    int id = 1;
    for (int layer : {kUpperHeaterLayer, kLowerHeaterLayer})
    {
        for (int p = 0; p < 4; ++p)
            cfg.heaters.push_back(cartridge(id++, layer, 0, p));
        for (int p = 3; p >= 0; --p)
            cfg.heaters.push_back(cartridge(id++, layer, 1, p));
    }

    // Long belts on the y faces, short belts on the x faces (corners belong to
    // the long belts).
    HeaterSpec u17{17, {}, 750.0}, u18{18, {}, 750.0}, u19{19, {}, 550.0}, u20{20, {}, 550.0};
    for (int k = 0; k < g.nz(); ++k)
    {
        for (int i = 0; i < g.nx; ++i)
        {
            u17.footprint.push_back({i, 0, k});
            u18.footprint.push_back({i, g.ny - 1, k});
        }
        for (int j = 1; j < g.ny - 1; ++j)
        {
            u19.footprint.push_back({0, j, k});
            u20.footprint.push_back({g.nx - 1, j, k});
        }
    }
    cfg.heaters.insert(cfg.heaters.end(), {u17, u18, u19, u20});

    // Cavity surfaces: k = 4 is the upper block face, k = 3 the lower one.
    const int upper = g.nz_per_block;
    const int lower = g.nz_per_block - 1;
    cfg.sensors.control = {{3, 2, upper}, {6, 2, upper}, {4, 4, upper}, {1, 3, upper},
                           {4, 3, lower}, {6, 2, lower}};
    cfg.sensors.auxiliary = {{2, 2, upper}, {7, 2, upper}, {2, 5, upper}, {7, 5, upper},
                             {2, 2, lower}, {7, 2, lower}, {2, 5, lower}, {7, 5, lower}};

    for (int i = cfg.cavity.i_begin; i < cfg.cavity.i_end; ++i)
        for (int j = cfg.cavity.j_begin; j < cfg.cavity.j_end; ++j)
            cfg.curing.resin_columns.push_back({i, j, 0});
    return cfg;
}

PlantConfig lumped_plant_config(double volume, double max_power)
{
    PlantConfig cfg;
    const double side = std::cbrt(volume);
    cfg.grid = GridSpec{1, 1, 1, 1, side, side, side};
    cfg.cavity = CavitySpec{0, 0, 0, 0, 0.0, 0.0};
    cfg.heaters = {HeaterSpec{1, {{0, 0, 0}}, max_power}};
    cfg.sensors.control = {{0, 0, 0}};
    cfg.sensors.auxiliary = {};
    return cfg;
}

std::vector<std::pair<int, int>> default_symmetry_pairs()
{
    return {{1, 8}, {2, 7}, {3, 6}, {4, 5}, {9, 16}, {10, 15}, {11, 14}, {12, 13}, {17, 18}, {19, 20}};
}

} // namespace moldmpc
