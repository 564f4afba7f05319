#ifndef CHRONOSIM_RUNNER_HPP
#define CHRONOSIM_RUNNER_HPP

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronosim/config.hpp"
#include "chronosim/csv.hpp"
#include "chronosim/metrics.hpp"
#include "chronosim/sim.hpp"

namespace chronosim {

inline constexpr const char* kTraceHeader =
    "measurement_id,t_m_s,warm_up,theta_est_gs_s,d_est_gs_s,theta_est_hg_s,"
    "d_est_hg_s,r_hat_gs,r_hat_hg,t_scfr_once_s,t_scfr_twice_s,err_once_s,"
    "err_twice_s";

inline constexpr const char* kSeriesHeader = "hop,seq,t_s,r_hat,warm";

struct RunOutput {
    std::string trace_path;
    std::string series_path;
    RunSummary summary;
    RunResult result;
};

// Trace row layout is fixed to the two-hop schema: the "gs" columns are the
// sensor's uplink hop, the "hg" columns the hop ending at the head. In a
// direct sensor->head run only the hg columns are populated.
inline std::string render_trace_csv(const RunResult& result) {
    std::string out = kTraceHeader;
    out += '\n';
    for (const auto& rec : result.records) {
        const bool multi = rec.hops.size() > 1;
        const HopEstimate& hg = rec.hops.back();
        out += std::to_string(rec.measurement_id);
        out += ',' + fmt_real(rec.t_m);
        out += rec.warm_up ? ",1" : ",0";
        if (multi) {
            const HopEstimate& gs = rec.hops.front();
            out += ',' + fmt_real(gs.theta_est);
            out += ',' + fmt_real(gs.delay_est);
        } else {
            out += ",nan,nan";
        }
        out += ',' + fmt_real(hg.theta_est);
        out += ',' + fmt_real(hg.delay_est);
        out += multi ? ',' + fmt_real(rec.hops.front().r_hat) : ",nan";
        out += ',' + fmt_real(hg.r_hat);
        out += ',' + fmt_real(rec.t_scfr_once);
        out += ',' + fmt_real(rec.t_scfr_twice);
        out += ',' + fmt_real(rec.err_once);
        out += ',' + fmt_real(rec.err_twice);
        out += '\n';
    }
    return out;
}

inline std::string render_series_csv(const RunResult& result) {
    std::string out = kSeriesHeader;
    out += '\n';
    for (const auto& p : result.series) {
        out += p.hop;
        out += ',' + std::to_string(p.seq);
        out += ',' + fmt_real(p.at);
        out += ',' + fmt_real(p.r_hat);
        out += p.warm ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

inline void print_summary(std::ostream& os, const ScenarioConfig& cfg,
                          const RunSummary& s) {
    auto row = [&](const HopSummary& h) {
        os << "  " << std::left << std::setw(12) << h.hop << std::right
           << " n=" << std::setw(4) << h.n << "  mse=" << fmt_real(h.mse)
           << "  min=" << fmt_real(h.min) << "  max=" << fmt_real(h.max)
           << "\n";
    };
    os << "scenario: " << cfg.nodes.size() << " nodes, horizon "
       << cfg.horizon << " s, beacon interval " << cfg.beacon_interval
       << " s, seed " << cfg.seed << "\n";
    os << "measurements: generated=" << s.generated
       << " delivered=" << s.delivered << " undelivered=" << s.undelivered
       << " warm_up_excluded=" << s.warm_up_excluded << "\n";
    row(s.sensor_hop);
    row(s.gateway_hop);
    row(s.end_to_end);
}

inline nlohmann::json summary_json(const ScenarioConfig& cfg,
                                   const RunSummary& s) {
    auto hop = [](const HopSummary& h) {
        return nlohmann::json{{"hop", h.hop},
                              {"n", h.n},
                              {"mse_s2", h.mse},
                              {"min_s", h.min},
                              {"max_s", h.max}};
    };
    return nlohmann::json{{"seed", cfg.seed},
                          {"horizon_s", cfg.horizon},
                          {"beacon_interval_s", cfg.beacon_interval},
                          {"generated", s.generated},
                          {"delivered", s.delivered},
                          {"undelivered", s.undelivered},
                          {"warm_up_excluded", s.warm_up_excluded},
                          {"sensor_hop", hop(s.sensor_hop)},
                          {"gateway_hop", hop(s.gateway_hop)},
                          {"end_to_end", hop(s.end_to_end)}};
}

// Runs one scenario and writes trace.csv plus series.csv into out_dir.
inline RunOutput run_scenario(const ScenarioConfig& cfg,
                              const std::filesystem::path& out_dir,
                              bool include_warm_up = false) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    RunOutput out;
    out.result = run(cfg);
    out.summary = summarize(out.result, cfg, include_warm_up);
    const auto trace = out_dir / "trace.csv";
    const auto series = out_dir / "series.csv";
    write_file_atomic(trace, render_trace_csv(out.result));
    write_file_atomic(series, render_series_csv(out.result));
    out.trace_path = trace.string();
    out.series_path = series.string();
    return out;
}

struct SweepOutput {
    std::vector<RunOutput> runs;
    std::string combined_path;
};

// One run per beacon-interval value, each in its own subdirectory, plus a
// combined per-value MSE table.
inline SweepOutput sweep_beacon_interval(ScenarioConfig cfg,
                                         const std::vector<double>& values,
                                         const std::filesystem::path& out_dir) {
    if (values.empty()) {
        throw UsageError("sweep needs at least one value");
    }
    for (double v : values) {
        ScenarioConfig probe = cfg;
        probe.beacon_interval = v;
        probe.validate();  // abort before running anything
    }
    SweepOutput out;
    std::string combined = "beacon_interval_s,mse_end_to_end,mse_sensor_hop,"
                           "mse_gateway_hop\n";
    for (double v : values) {
        ScenarioConfig c = cfg;
        c.beacon_interval = v;
        std::ostringstream name;
        name << "bi_" << v;
        RunOutput r = run_scenario(c, out_dir / name.str());
        combined += fmt_real(v);
        combined += ',' + fmt_real(r.summary.end_to_end.mse);
        combined += ',' + fmt_real(r.summary.sensor_hop.mse);
        combined += ',' + fmt_real(r.summary.gateway_hop.mse);
        combined += '\n';
        out.runs.push_back(std::move(r));
    }
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "sweep.csv";
    write_file_atomic(path, combined);
    out.combined_path = path.string();
    return out;
}

// The single-hop scenario derived from a two-hop one: sensor reports
// directly to the head over the combined fixed delay, sensor clock
// unchanged, same seed.
inline ScenarioConfig derive_single_hop(const ScenarioConfig& cfg) {
    if (cfg.nodes.size() != 3) {
        throw UsageError("compare needs a two-hop chain "
                         "(head, one gateway, sensor)");
    }
    ScenarioConfig single = cfg;
    single.nodes = {cfg.nodes.front(), cfg.nodes.back()};
    LinkSpec direct;
    direct.from = single.nodes[0].name;
    direct.to = single.nodes[1].name;
    double total = 0.0;
    for (const auto& l : cfg.links) {
        total += l.fixed_delay();
    }
    direct.fixed_delay_s = total;
    // No standard way to combine two noise models; keep the sensor hop's.
    direct.noise = cfg.links.back().noise;
    single.links = {direct};
    single.processing_delay_a = 0.0;  // no relay, nothing to process
    return single;
}

struct CompareOutput {
    RunOutput two_hop;
    RunOutput single_hop;
    double mse_two_hop = 0.0;
    double mse_single_hop = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    std::string combined_path;
};

inline CompareOutput compare_two_hop_vs_single(
    const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    CompareOutput out;
    const ScenarioConfig single = derive_single_hop(cfg);
    out.two_hop = run_scenario(cfg, out_dir / "two_hop");
    out.single_hop = run_scenario(single, out_dir / "single_hop");
    out.mse_two_hop = out.two_hop.summary.end_to_end.mse;
    out.mse_single_hop = out.single_hop.summary.end_to_end.mse;
    if (out.mse_single_hop > 0.0) {
        out.ratio = out.mse_two_hop / out.mse_single_hop;
    }
    std::string combined = "case,mse_end_to_end\n";
    combined += "two_hop," + fmt_real(out.mse_two_hop) + '\n';
    combined += "single_hop," + fmt_real(out.mse_single_hop) + '\n';
    combined += "ratio," + fmt_real(out.ratio) + '\n';
    const auto path = out_dir / "compare.csv";
    write_file_atomic(path, combined);
    out.combined_path = path.string();
    return out;
}

}  // namespace chronosim

#endif
