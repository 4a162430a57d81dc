// Command-line front end: open-loop data, identification, closed-loop runs
// and indicator recomputation.

#include "moldmpc/harness/config_io.hpp"
#include "moldmpc/harness/experiment.hpp"
#include "moldmpc/harness/export.hpp"
#include "moldmpc/sysid/model_file.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace moldmpc;

namespace
{

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
};

ExperimentConfig load_config(const CommonOptions& opts)
{
    ExperimentConfig config = opts.config_path.empty() ? default_experiment_config()
                                                       : load_experiment_config(opts.config_path);
    if (opts.seed)
        config.seed = *opts.seed;
    return config;
}

IdentifiedModels obtain_models(const ExperimentConfig& config, const std::string& models_dir)
{
    if (models_dir.empty())
    {
        std::cerr << "identifying ROMs...\n";
        return identify_models(config);
    }
    const fs::path dir(models_dir);
    return {load_model(dir / "rom_control.json"), load_model(dir / "rom_extended.json")};
}

Vector heater_limits(const ExperimentConfig& config)
{
    Vector limits(static_cast<Eigen::Index>(config.plant.heaters.size()));
    for (size_t h = 0; h < config.plant.heaters.size(); ++h)
        limits(static_cast<Eigen::Index>(h)) = config.plant.heaters[h].max_power;
    return limits;
}

void print_report(const std::string& name, const IndicatorReport& r)
{
    std::printf("%-10s avg_stat %7.3f  ref_stat %7.3f  avg_global %7.3f  ref_global %7.3f  (n=%d, %d samples, "
                "t_i=%g t_f=%g)\n",
                name.c_str(), r.rmse_avg_stat, r.rmse_ref_stat, r.rmse_avg_global, r.rmse_ref_global, r.sensors,
                r.samples, r.t_i, r.t_f);
}

void print_stats(const char* label, const RomErrorStats& s)
{
    std::printf("%-14s rms %.4f C  max %.3f %% of span\n", label, s.rms, s.max_percent);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Thermal MPC toolkit for a two-block heated mold"};
    app.require_subcommand(1);
    CommonOptions common;
    app.add_option("--config", common.config_path, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
    app.add_option("--seed", common.seed, "Sensor-noise seed");
    app.add_option("--out", common.out_dir, "Output directory");
    app.fallthrough();

    auto* config_cmd = app.add_subcommand("config", "Write the built-in configuration to <out>/config.json");

    auto* simulate = app.add_subcommand("simulate", "Open-loop identification dataset");
    double duration = 0.0;
    simulate->add_option("--duration", duration, "Seconds to simulate (default from config)");

    auto* identify = app.add_subcommand("identify", "Fit and validate the ROMs");
    std::string dataset_path;
    identify->add_option("--dataset", dataset_path, "Dataset CSV from `simulate` (default: generate)")
        ->check(CLI::ExistingFile);

    auto* run = app.add_subcommand("run", "Closed loop with one controller variant");
    std::string variant_name = "symmetric";
    std::string profile_name = "empty";
    std::string models_dir;
    run->add_option("--variant", variant_name, "standard | extended | symmetric");
    run->add_option("--profile", profile_name, "empty | molding")->check(CLI::IsMember({"empty", "molding"}));
    run->add_option("--models", models_dir, "Directory with ROM files from `identify`")->check(CLI::ExistingDirectory);

    auto* compare = app.add_subcommand("compare", "All variants plus the molding run");
    compare->add_option("--models", models_dir, "Directory with ROM files from `identify`")
        ->check(CLI::ExistingDirectory);

    auto* indicators = app.add_subcommand("indicators", "Recompute indicators from a run CSV");
    std::string input_path;
    std::string sensor_set = "all";
    std::optional<double> t_i;
    std::optional<double> t_f;
    indicators->add_option("input", input_path, "Run CSV")->required()->check(CLI::ExistingFile);
    indicators->add_option("--sensors", sensor_set, "all | control")->check(CLI::IsMember({"all", "control"}));
    indicators->add_option("--t-i", t_i, "Start of the global window (default from config)");
    indicators->add_option("--t-f", t_f, "Stationary instant (default: last sample)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const ExperimentConfig config = load_config(common);
        const fs::path out(common.out_dir);

        if (config_cmd->parsed())
        {
            fs::create_directories(out);
            save_experiment_config(config, out / "config.json");
            std::cout << "wrote " << (out / "config.json").string() << "\n";
        }
        else if (simulate->parsed())
        {
            ExperimentConfig c = config;
            if (duration > 0.0)
                c.identification.duration = duration;
            const IoDataset data = identification_dataset(c);
            fs::create_directories(out);
            write_dataset_csv(data, out / "identification.csv");
            std::cout << "wrote " << data.rows() << " samples to " << (out / "identification.csv").string() << "\n";
        }
        else if (identify->parsed())
        {
            const IdentifiedModels models = dataset_path.empty()
                                                ? identify_models(config)
                                                : identify_models(config, read_dataset_csv(fs::path(dataset_path)));
            fs::create_directories(out);
            save_model(models.control, out / "rom_control.json");
            save_model(models.extended, out / "rom_extended.json");
            std::printf("control ROM: %d outputs, spectral radius %.6f\n", models.control.m,
                        models.control.spectral_radius());
            std::printf("extended ROM: %d outputs, spectral radius %.6f\n", models.extended.m,
                        models.extended.spectral_radius());
            const RomValidationReport report = validate_models(config, models);
            std::printf("validation on the nonlinear plant (span %.1f C):\n", report.reference_span);
            print_stats("  ROM alone", report.open_loop);
            if (report.with_observer)
                print_stats("  ROM+observer", *report.with_observer);
        }
        else if (run->parsed())
        {
            const Variant variant = parse_variant(variant_name);
            const IdentifiedModels models = obtain_models(config, models_dir);
            const bool molding = profile_name == "molding";
            const ReferenceProfile profile = molding
                                                 ? molding_profile(config.profiles.injection_time,
                                                                   config.profiles.cure_hold)
                                                 : empty_mold_profile();
            const RunRecord record = run_closed_loop(config, models, variant, profile, {molding, config.seed});
            const IndicatorReport report =
                molding ? molding_indicators(config, record) : empty_mold_indicators(config, record);
            const std::string stem = std::string(to_string(variant)) + (molding ? "_molding" : "");
            export_run(record, out, stem, molding ? SensorSet::Control : SensorSet::All, report.t_i,
                       heater_limits(config));
            print_report(to_string(variant), report);
            if (molding)
                std::printf("minimum cure degree at the end: %.4f\n", record.min_cure(record.rows() - 1));
        }
        else if (compare->parsed())
        {
            const IdentifiedModels models = obtain_models(config, models_dir);
            const Comparison comparison = compare_controllers(config, models);
            export_comparison(comparison, config, out);
            for (const auto& row : comparison.rows)
                print_report(row.name, row.report);
            std::cout << "wrote " << (out / "comparison.csv").string() << "\n";
        }
        else if (indicators->parsed())
        {
            const RunRecord record = read_run_csv(fs::path(input_path));
            if (record.rows() == 0)
                throw InputError("run file has no rows");
            const SensorSet set = sensor_set == "control" ? SensorSet::Control : SensorSet::All;
            const IndicatorReport report =
                compute_indicators(record.time, record.reference, sensor_columns(record, set),
                                   t_i.value_or(config.profiles.empty_t_i), t_f.value_or(record.time(record.rows() - 1)));
            print_report(fs::path(input_path).stem().string(), report);
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "moldmpc: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
