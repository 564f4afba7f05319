#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chronosim/config.hpp"
#include "chronosim/runner.hpp"

namespace {

chronosim::ScenarioConfig load_with_overrides(
    const std::string& config_path, const std::vector<std::string>& sets) {
    chronosim::ScenarioConfig cfg = chronosim::load_scenario(config_path);
    for (const auto& s : sets) {
        chronosim::apply_override(cfg, s);
    }
    if (const char* env = std::getenv("CHRONOSIM_SEED")) {
        chronosim::apply_override(cfg, std::string("seed=") + env);
    }
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chronosim: multi-hop WSN time-synchronization simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
    bool json_summary = false;
    bool include_warm_up = false;

    auto* run_cmd = app.add_subcommand("run", "run one scenario");
    run_cmd->add_option("config", config_path, "scenario file")->required();
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    run_cmd->add_option("--set", sets, "override key=value");
    run_cmd->add_flag("--json", json_summary,
                      "also print a one-line JSON summary");
    run_cmd->add_flag("--include-warm-up", include_warm_up,
                      "include warm-up records in MSE");

    std::string param = "beacon_interval_s";
    std::string values_csv;
    auto* sweep_cmd = app.add_subcommand("sweep",
                                         "run one scenario per value");
    sweep_cmd->add_option("config", config_path, "scenario file")->required();
    sweep_cmd->add_option("--param", param, "swept parameter")
        ->check(CLI::IsMember({"beacon_interval_s"}));
    sweep_cmd->add_option("--values", values_csv, "comma-separated values")
        ->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_option("--set", sets, "override key=value");

    auto* compare_cmd =
        app.add_subcommand("compare", "two-hop vs derived single-hop");
    compare_cmd->add_option("config", config_path, "scenario file")
        ->required();
    compare_cmd->add_option("--out", out_dir, "output directory")->required();
    compare_cmd->add_option("--set", sets, "override key=value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = load_with_overrides(config_path, sets);
            const auto out =
                chronosim::run_scenario(cfg, out_dir, include_warm_up);
            chronosim::print_summary(std::cout, cfg, out.summary);
            std::cout << "trace:  " << out.trace_path << "\n";
            std::cout << "series: " << out.series_path << "\n";
            if (json_summary) {
                std::cout << chronosim::summary_json(cfg, out.summary).dump()
                          << "\n";
            }
        } else if (sweep_cmd->parsed()) {
            const auto cfg = load_with_overrides(config_path, sets);
            std::vector<double> values;
            std::stringstream ss(values_csv);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) {
                    values.push_back(std::stod(item));
                }
            }
            const auto out =
                chronosim::sweep_beacon_interval(cfg, values, out_dir);
            for (std::size_t i = 0; i < values.size(); ++i) {
                std::cout << param << "=" << values[i] << "  mse_end_to_end="
                          << chronosim::fmt_real(
                                 out.runs[i].summary.end_to_end.mse)
                          << "\n";
            }
            std::cout << "combined: " << out.combined_path << "\n";
        } else if (compare_cmd->parsed()) {
            const auto cfg = load_with_overrides(config_path, sets);
            const auto out =
                chronosim::compare_two_hop_vs_single(cfg, out_dir);
            std::cout << "mse_two_hop=" << chronosim::fmt_real(out.mse_two_hop)
                      << "\nmse_single_hop="
                      << chronosim::fmt_real(out.mse_single_hop)
                      << "\nratio=" << chronosim::fmt_real(out.ratio) << "\n";
            std::cout << "combined: " << out.combined_path << "\n";
        }
    } catch (const chronosim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
