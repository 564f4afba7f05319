#ifndef CHRONOSIM_CONFIG_HPP
#define CHRONOSIM_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chronosim/clock.hpp"
#include "chronosim/errors.hpp"

namespace chronosim {

inline constexpr double kDefaultPropSpeedMps = 2.998e8;

struct NoiseModel {
    enum class Kind { None, Gaussian, Exponential };
    Kind kind = Kind::None;
    double param = 0.0;  // sigma for gaussian, mean for exponential
};

// One hop of the chain. The fixed delay is either given directly or derived
// from distance over propagation speed.
struct LinkSpec {
    std::string from;
    std::string to;
    std::optional<double> distance_m;
    std::optional<double> fixed_delay_s;
    NoiseModel noise;
    double prop_speed_mps = kDefaultPropSpeedMps;

    double fixed_delay() const {
        if (fixed_delay_s) {
            return *fixed_delay_s;
        }
        if (distance_m) {
            return *distance_m / prop_speed_mps;
        }
        return 0.0;
    }
};

struct NodeSpec {
    std::string name;
    ClockParams clock;
};

// Full experiment definition. Nodes form a chain in declaration order:
// head first, sensor last, gateways between. links[i] connects nodes[i] to
// nodes[i+1].
struct ScenarioConfig {
    double horizon = 120.0;
    double beacon_interval = 0.1;
    std::uint64_t n_measurements = 100;
    double processing_delay_a = 0.0;
    std::uint64_t seed = 1;
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;

    std::size_t n_gateways() const {
        return nodes.size() >= 2 ? nodes.size() - 2 : 0;
    }

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        auto bad = [&](const std::string& msg) { v.push_back(msg); };
        if (!(horizon > 0.0) || !std::isfinite(horizon)) {
            bad("horizon_s must be > 0");
        }
        if (!(beacon_interval > 0.0) || !std::isfinite(beacon_interval)) {
            bad("beacon_interval_s must be > 0");
        }
        if (!(processing_delay_a >= 0.0) ||
            !std::isfinite(processing_delay_a)) {
            bad("processing_delay_a_s must be >= 0");
        }
        if (nodes.size() < 2) {
            bad("topology needs at least two nodes (head and sensor)");
        }
        for (const auto& n : nodes) {
            if (!n.clock.valid()) {
                bad("node " + n.name + ": invalid clock params");
            } else if (!n.clock.plausible()) {
                bad("node " + n.name +
                    ": ratio outside [0.99, 1.01] (ppm-scale skews only)");
            }
        }
        if (nodes.size() >= 2 && links.size() != nodes.size() - 1) {
            bad("expected " + std::to_string(nodes.size() - 1) +
                " links for " + std::to_string(nodes.size()) + " nodes, got " +
                std::to_string(links.size()));
        } else {
            for (std::size_t i = 0; i < links.size(); ++i) {
                const auto& l = links[i];
                if (i + 1 < nodes.size() &&
                    (l.from != nodes[i].name || l.to != nodes[i + 1].name)) {
                    bad("link " + l.from + " -> " + l.to +
                        " does not connect consecutive chain nodes");
                }
                if (l.distance_m && l.fixed_delay_s) {
                    bad("link " + l.from + " -> " + l.to +
                        ": give distance_m or fixed_delay_s, not both");
                }
                if (l.distance_m && !(*l.distance_m >= 0.0)) {
                    bad("link " + l.from + " -> " + l.to +
                        ": distance_m must be >= 0");
                }
                if (l.fixed_delay_s && !(*l.fixed_delay_s >= 0.0)) {
                    bad("link " + l.from + " -> " + l.to +
                        ": fixed_delay_s must be >= 0");
                }
                if (!(l.prop_speed_mps > 0.0)) {
                    bad("link " + l.from + " -> " + l.to +
                        ": prop_speed_mps must be > 0");
                }
                if (l.noise.kind != NoiseModel::Kind::None &&
                    !(l.noise.param >= 0.0)) {
                    bad("link " + l.from + " -> " + l.to +
                        ": noise_param_s must be >= 0");
                }
            }
        }
        return v;
    }

    void validate() const {
        auto v = violations();
        if (!v.empty()) {
            throw ConfigError(std::move(v));
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& value,
                         std::vector<std::string>& errs) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return d;
    } catch (const std::exception&) {
        errs.push_back(key + ": cannot parse '" + value + "' as a number");
        return 0.0;
    }
}

inline std::uint64_t parse_count(const std::string& key,
                                 const std::string& value,
                                 std::vector<std::string>& errs) {
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(value, &pos);
        if (pos != value.size() || d < 0) {
            throw std::invalid_argument(value);
        }
        return static_cast<std::uint64_t>(d);
    } catch (const std::exception&) {
        errs.push_back(key + ": cannot parse '" + value +
                       "' as a non-negative integer");
        return 0;
    }
}

inline void apply_node_key(NodeSpec& node, const std::string& key,
                           const std::string& value,
                           std::vector<std::string>& errs) {
    if (key == "ratio") {
        node.clock.ratio = parse_real("node " + node.name + " ratio", value,
                                      errs);
    } else if (key == "offset_s") {
        node.clock.offset = parse_real("node " + node.name + " offset_s",
                                       value, errs);
    } else {
        errs.push_back("unknown key '" + key + "' in [node " + node.name +
                       "]");
    }
}

inline void apply_link_key(LinkSpec& link, const std::string& key,
                           const std::string& value,
                           std::vector<std::string>& errs) {
    const std::string where = "link " + link.from + " " + link.to;
    if (key == "distance_m") {
        link.distance_m = parse_real(where + " distance_m", value, errs);
    } else if (key == "fixed_delay_s") {
        link.fixed_delay_s = parse_real(where + " fixed_delay_s", value, errs);
    } else if (key == "noise") {
        if (value == "none") {
            link.noise.kind = NoiseModel::Kind::None;
        } else if (value == "gaussian") {
            link.noise.kind = NoiseModel::Kind::Gaussian;
        } else if (value == "exponential") {
            link.noise.kind = NoiseModel::Kind::Exponential;
        } else {
            errs.push_back(where + ": unknown noise model '" + value + "'");
        }
    } else if (key == "noise_param_s") {
        link.noise.param = parse_real(where + " noise_param_s", value, errs);
    } else if (key == "prop_speed_mps") {
        link.prop_speed_mps = parse_real(where + " prop_speed_mps", value,
                                         errs);
    } else {
        errs.push_back("unknown key '" + key + "' in [" + where + "]");
    }
}

}  // namespace detail

// Parses the flat key = value scenario format. Sections [node <name>] and
// [link <from> <to>] introduce chain entities in order; '#' starts a
// comment. Unknown keys are an error; all problems are reported at once.
inline ScenarioConfig parse_scenario(std::istream& in,
                                     const std::string& origin = "<input>") {
    ScenarioConfig cfg;
    cfg.nodes.clear();
    cfg.links.clear();
    std::vector<std::string> errs;

    enum class Section { Top, Node, Link };
    Section section = Section::Top;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string at = origin + ":" + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']') {
                errs.push_back(at + ": malformed section header");
                continue;
            }
            std::istringstream hdr(line.substr(1, line.size() - 2));
            std::string kind;
            hdr >> kind;
            if (kind == "node") {
                std::string name, extra;
                hdr >> name;
                if (name.empty() || (hdr >> extra)) {
                    errs.push_back(at + ": [node] takes exactly one name");
                    continue;
                }
                cfg.nodes.push_back(NodeSpec{name, {}});
                section = Section::Node;
            } else if (kind == "link") {
                std::string from, to, extra;
                hdr >> from >> to;
                if (from.empty() || to.empty() || (hdr >> extra)) {
                    errs.push_back(at + ": [link] takes exactly two names");
                    continue;
                }
                cfg.links.push_back(LinkSpec{from, to, {}, {}, {},
                                             kDefaultPropSpeedMps});
                section = Section::Link;
            } else {
                errs.push_back(at + ": unknown section '" + kind + "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back(at + ": expected key = value");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));

        switch (section) {
            case Section::Top:
                if (key == "horizon_s") {
                    cfg.horizon = detail::parse_real(key, value, errs);
                } else if (key == "beacon_interval_s") {
                    cfg.beacon_interval = detail::parse_real(key, value, errs);
                } else if (key == "n_measurements") {
                    cfg.n_measurements = detail::parse_count(key, value, errs);
                } else if (key == "seed") {
                    cfg.seed = detail::parse_count(key, value, errs);
                } else if (key == "processing_delay_a_s") {
                    cfg.processing_delay_a =
                        detail::parse_real(key, value, errs);
                } else {
                    errs.push_back(at + ": unknown key '" + key + "'");
                }
                break;
            case Section::Node:
                detail::apply_node_key(cfg.nodes.back(), key, value, errs);
                break;
            case Section::Link:
                detail::apply_link_key(cfg.links.back(), key, value, errs);
                break;
        }
    }

    if (!errs.empty()) {
        throw ConfigError(std::move(errs));
    }
    return cfg;
}

inline ScenarioConfig parse_scenario_string(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "<string>");
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read scenario file: " + path);
    }
    return parse_scenario(in, path);
}

// Applies one `--set key=value` override. Top-level keys match the file
// format verbatim; node and link keys use node.<name>.<key> and
// link.<from>.<to>.<key>.
inline void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw UsageError("override must be key=value: " + assignment);
    }
    const std::string key = detail::trim(assignment.substr(0, eq));
    const std::string value = detail::trim(assignment.substr(eq + 1));
    std::vector<std::string> errs;

    if (key.rfind("node.", 0) == 0) {
        const auto rest = key.substr(5);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) {
            throw UsageError("node override must be node.<name>.<key>");
        }
        const std::string name = rest.substr(0, dot);
        for (auto& n : cfg.nodes) {
            if (n.name == name) {
                detail::apply_node_key(n, rest.substr(dot + 1), value, errs);
                if (!errs.empty()) {
                    throw ConfigError(std::move(errs));
                }
                return;
            }
        }
        throw UsageError("unknown node '" + name + "' in override");
    }
    if (key.rfind("link.", 0) == 0) {
        const auto rest = key.substr(5);
        const auto d1 = rest.find('.');
        const auto d2 = d1 == std::string::npos ? std::string::npos
                                                : rest.find('.', d1 + 1);
        if (d2 == std::string::npos) {
            throw UsageError("link override must be link.<from>.<to>.<key>");
        }
        const std::string from = rest.substr(0, d1);
        const std::string to = rest.substr(d1 + 1, d2 - d1 - 1);
        for (auto& l : cfg.links) {
            if (l.from == from && l.to == to) {
                detail::apply_link_key(l, rest.substr(d2 + 1), value, errs);
                if (!errs.empty()) {
                    throw ConfigError(std::move(errs));
                }
                return;
            }
        }
        throw UsageError("unknown link '" + from + " " + to + "' in override");
    }

    if (key == "horizon_s") {
        cfg.horizon = detail::parse_real(key, value, errs);
    } else if (key == "beacon_interval_s") {
        cfg.beacon_interval = detail::parse_real(key, value, errs);
    } else if (key == "n_measurements") {
        cfg.n_measurements = detail::parse_count(key, value, errs);
    } else if (key == "seed") {
        cfg.seed = detail::parse_count(key, value, errs);
    } else if (key == "processing_delay_a_s") {
        cfg.processing_delay_a = detail::parse_real(key, value, errs);
    } else {
        throw UsageError("unknown override key '" + key + "'");
    }
    if (!errs.empty()) {
        throw ConfigError(std::move(errs));
    }
}

// The desk-scale reference scenario: three-node chain, 100 m and 200 m hops,
// 100 ppm / 1 s gateway clock and 200 ppm / 0.9 s sensor clock, 100 ms
// beacons, 120 s horizon, 100 Poisson measurements, zero noise.
inline ScenarioConfig reference_scenario(std::uint64_t seed = 1) {
    ScenarioConfig cfg;
    cfg.horizon = 120.0;
    cfg.beacon_interval = 0.1;
    cfg.n_measurements = 100;
    cfg.processing_delay_a = 0.0;
    cfg.seed = seed;
    cfg.nodes = {
        {"head", ClockParams{1.0, 0.0}},
        {"gateway", ClockParams{1.0001, 1.0}},
        {"sensor", ClockParams{1.0002, 0.9}},
    };
    LinkSpec hg;
    hg.from = "head";
    hg.to = "gateway";
    hg.distance_m = 100.0;
    LinkSpec gs;
    gs.from = "gateway";
    gs.to = "sensor";
    gs.distance_m = 200.0;
    cfg.links = {hg, gs};
    return cfg;
}

}  // namespace chronosim

#endif
