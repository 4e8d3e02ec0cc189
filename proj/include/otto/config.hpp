// config.hpp
// Flat key=value experiment configuration.
//
//   # comment
//   experiment = omega-pi
//   t_c = 0.5
//   n = 20
//
// Angles accept plain radians or multiples of pi: "0.3", "pi", "π/20",
// "3*pi/4", "0.5pi". Integer ranges are "start:stop[:step]" with an inclusive
// stop.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "otto/analysis.hpp"
#include "otto/error.hpp"
#include "otto/thermal.hpp"

namespace otto {

enum class Experiment { Single, Collective, BoostCurve, EpScaling, EpRatio, OmegaPi, SplitCycle, NoInversion };

struct ExperimentInfo {
    Experiment id;
    std::string_view name;
    std::string_view summary;
};

inline constexpr std::array<ExperimentInfo, 8> kExperiments{{
    {Experiment::Single, "single", "one unit, bare and with coherence extraction"},
    {Experiment::Collective, "collective", "per-unit ledger of one collective cycle"},
    {Experiment::BoostCurve, "boost-curve", "collective vs standalone work at fixed delta_theta"},
    {Experiment::EpScaling, "ep-scaling", "Omega=pi entropy pollution and W/EP against N"},
    {Experiment::EpRatio, "ep-ratio", "Omega=pi entropy pollution relative to a standalone baseline"},
    {Experiment::OmegaPi, "omega-pi", "per-unit bath entropy of the Omega=pi machine"},
    {Experiment::SplitCycle, "split-cycle", "entropy pollution when one cycle is split into N"},
    {Experiment::NoInversion, "no-inversion", "single-temperature engine fed by a coherent donor"},
}};

inline std::string_view to_string(Experiment e) {
    for (const auto& info : kExperiments) {
        if (info.id == e) return info.name;
    }
    return "unknown";
}

struct IntRange {
    int start = 1;
    int stop = 1;
    int step = 1;

    std::vector<int> values() const {
        std::vector<int> out;
        for (int n = start; n <= stop; n += step) out.push_back(n);
        return out;
    }
    std::string to_string() const {
        return std::to_string(start) + ":" + std::to_string(stop) + ":" + std::to_string(step);
    }
};

/// Fully resolved configuration; every field holds its effective value.
struct ExperimentConfig {
    Experiment experiment = Experiment::Single;
    LevelStructure levels{1.0, 2.0};
    BathPair baths{0.5, 5.0};
    int n = 10;
    IntRange n_list{2, 64, 1};
    double delta_theta = std::numbers::pi / 8;
    double omega = std::numbers::pi;
    Baseline baseline = Baseline::Sepo;
    std::optional<std::string> output;

    /// Resolved parameters as ordered key=value pairs for the CSV header.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

/// Parses "0.3", "pi", "π/20", "3*pi/4", "0.5pi" into radians.
inline std::optional<double> parse_angle(std::string_view text) {
    std::string s;
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] == ' ' || text[k] == '\t') continue;
        if (text.substr(k, 2) == "\xCF\x80") {  // UTF-8 for π
            s += "pi";
            ++k;
            continue;
        }
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(text[k])));
    }
    const std::size_t at = s.find("pi");
    if (at == std::string::npos) return detail::parse_double(s);

    std::string_view head(s.data(), at);
    std::string_view tail(s.data() + at + 2, s.size() - at - 2);
    double factor = 1.0;
    if (!head.empty()) {
        if (head.back() == '*') head.remove_suffix(1);
        const auto f = detail::parse_double(head);
        if (!f) return std::nullopt;
        factor = *f;
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') return std::nullopt;
        const auto d = detail::parse_double(tail.substr(1));
        if (!d || *d == 0.0) return std::nullopt;
        divisor = *d;
    }
    return factor * std::numbers::pi / divisor;
}

inline std::optional<IntRange> parse_range(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : text) {
        if (c == ':') {
            parts.push_back(detail::trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(detail::trim(cur));
    if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
    const auto a = detail::parse_int(parts[0]);
    const auto b = detail::parse_int(parts[1]);
    const auto c = parts.size() == 3 ? detail::parse_int(parts[2]) : std::optional<int>(1);
    if (!a || !b || !c) return std::nullopt;
    return IntRange{*a, *b, *c};
}

inline std::optional<Experiment> parse_experiment(std::string_view name) {
    for (const auto& info : kExperiments) {
        if (info.name == name) return info.id;
    }
    return std::nullopt;
}

inline ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (line_no == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected key=value, got '" + line + "'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (entries.contains(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        entries[key] = {value, line_no};
    }

    static const std::array<std::string_view, 11> known{"experiment", "delta_e_c", "delta_e_h", "t_c",      "t_h",
                                                        "n",          "n_list",    "delta_theta", "omega", "baseline",
                                                        "output"};
    for (const auto& [key, entry] : entries) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(entry.second, "unknown key '" + key + "'");
        }
    }

    const auto line_of = [&](const std::string& key) { return entries.contains(key) ? entries[key].second : 0; };

    const auto positive = [&](const std::string& key, double& target) {
        if (!entries.contains(key)) return;
        const auto& [value, line] = entries[key];
        const auto v = detail::parse_double(value);
        if (!v) throw ConfigError(line, "cannot parse '" + value + "' as a number for " + key);
        if (!(*v > 0.0)) throw ConfigError(line, key + " must be positive");
        target = *v;
    };

    if (entries.contains("experiment")) {
        const auto& [value, line] = entries["experiment"];
        const auto e = parse_experiment(value);
        if (!e) throw ConfigError(line, "unknown experiment '" + value + "'");
        cfg.experiment = *e;
    }
    positive("delta_e_c", cfg.levels.delta_e_c);
    positive("delta_e_h", cfg.levels.delta_e_h);
    positive("t_c", cfg.baths.t_c);
    positive("t_h", cfg.baths.t_h);
    if (!(cfg.levels.delta_e_c < cfg.levels.delta_e_h)) {
        throw ConfigError(std::max(line_of("delta_e_c"), line_of("delta_e_h")), "delta_e_c must be below delta_e_h");
    }

    if (entries.contains("n")) {
        const auto& [value, line] = entries["n"];
        const auto v = detail::parse_int(value);
        if (!v) throw ConfigError(line, "cannot parse '" + value + "' as an integer for n");
        if (*v < 1) throw ConfigError(line, "n must be at least 1");
        cfg.n = *v;
    }
    if (entries.contains("n_list")) {
        const auto& [value, line] = entries["n_list"];
        const auto r = parse_range(value);
        if (!r) throw ConfigError(line, "n_list must be start:stop[:step], got '" + value + "'");
        if (r->start < 1 || r->step < 1 || r->stop < r->start) {
            throw ConfigError(line, "n_list needs 1 <= start <= stop and step >= 1");
        }
        cfg.n_list = *r;
    }
    if (entries.contains("baseline")) {
        const auto& [value, line] = entries["baseline"];
        if (value == "swo") {
            cfg.baseline = Baseline::Swo;
        } else if (value == "sepo") {
            cfg.baseline = Baseline::Sepo;
        } else {
            throw ConfigError(line, "baseline must be swo or sepo");
        }
    }
    if (entries.contains("output")) {
        const auto& [value, line] = entries["output"];
        if (value.empty()) throw ConfigError(line, "output path is empty");
        cfg.output = value;
    }

    std::optional<double> delta_theta, omega;
    for (const char* key : {"delta_theta", "omega"}) {
        if (!entries.contains(key)) continue;
        const auto& [value, line] = entries[key];
        const auto v = parse_angle(value);
        if (!v) throw ConfigError(line, std::string("cannot parse '") + value + "' as an angle for " + key);
        if (!(*v > 0.0)) throw ConfigError(line, std::string(key) + " must be positive");
        (std::string_view(key) == "omega" ? omega : delta_theta) = *v;
    }
    const int angle_line = std::max(line_of("delta_theta"), line_of("omega"));

    switch (cfg.experiment) {
    case Experiment::Collective:
        if (delta_theta && omega) throw ConfigError(angle_line, "give exactly one of delta_theta and omega");
        cfg.omega = omega ? *omega : delta_theta ? cfg.n * *delta_theta : std::numbers::pi;
        cfg.delta_theta = delta_theta ? *delta_theta : cfg.omega / cfg.n;
        if (cfg.omega > std::numbers::pi + kOmegaPiTol) {
            throw ConfigError(angle_line, "Omega = n * delta_theta must not exceed pi");
        }
        break;
    case Experiment::OmegaPi:
    case Experiment::EpScaling:
    case Experiment::EpRatio:
        if (delta_theta) throw ConfigError(line_of("delta_theta"), "delta_theta is fixed to pi/n by this experiment");
        if (omega && std::abs(*omega - std::numbers::pi) > kOmegaPiTol) {
            throw ConfigError(line_of("omega"), "this experiment runs at Omega = pi");
        }
        cfg.omega = std::numbers::pi;
        cfg.delta_theta = std::numbers::pi / cfg.n;
        if (cfg.experiment == Experiment::OmegaPi && !entries.contains("n")) {
            cfg.n = 20;
            cfg.delta_theta = std::numbers::pi / cfg.n;
        }
        break;
    case Experiment::BoostCurve:
        if (omega) throw ConfigError(line_of("omega"), "boost-curve is parameterized by delta_theta");
        cfg.delta_theta = delta_theta.value_or(std::numbers::pi / 20);
        if (!entries.contains("n_list")) cfg.n_list = {1, 100, 1};
        break;
    case Experiment::Single:
    case Experiment::SplitCycle:
    case Experiment::NoInversion:
        if (omega) throw ConfigError(line_of("omega"), "this experiment is parameterized by delta_theta");
        cfg.delta_theta = delta_theta.value_or(cfg.experiment == Experiment::NoInversion ? std::numbers::pi / 4
                                                                                           : std::numbers::pi / 8);
        if (cfg.delta_theta > std::numbers::pi + kOmegaPiTol) {
            throw ConfigError(line_of("delta_theta"), "delta_theta must not exceed pi");
        }
        if (cfg.experiment == Experiment::SplitCycle && !entries.contains("n")) cfg.n = 64;
        break;
    }

    if (cfg.experiment == Experiment::NoInversion &&
        std::abs(cfg.baths.t_c - cfg.baths.t_h) > 1e-12 * std::max(cfg.baths.t_c, cfg.baths.t_h)) {
        throw ConfigError(std::max(line_of("t_c"), line_of("t_h")), "no-inversion requires t_c == t_h");
    }
    if (cfg.experiment == Experiment::EpRatio && cfg.baseline == Baseline::Sepo && cfg.n_list.start < 2) {
        throw ConfigError(line_of("n_list"), "the sepo baseline needs n >= 2");
    }
    return cfg;
}

inline std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out{
        {"experiment", std::string(to_string(experiment))},
        {"delta_e_c", format_number(levels.delta_e_c)},
        {"delta_e_h", format_number(levels.delta_e_h)},
        {"t_c", format_number(baths.t_c)},
        {"t_h", format_number(baths.t_h)},
    };
    switch (experiment) {
    case Experiment::Single:
    case Experiment::NoInversion:
        out.push_back({"delta_theta", format_number(delta_theta)});
        break;
    case Experiment::SplitCycle:
        out.push_back({"n", std::to_string(n)});
        out.push_back({"delta_theta", format_number(delta_theta)});
        break;
    case Experiment::Collective:
    case Experiment::OmegaPi:
        out.push_back({"n", std::to_string(n)});
        out.push_back({"delta_theta", format_number(delta_theta)});
        out.push_back({"omega", format_number(omega)});
        break;
    case Experiment::BoostCurve:
        out.push_back({"n_list", n_list.to_string()});
        out.push_back({"delta_theta", format_number(delta_theta)});
        break;
    case Experiment::EpScaling:
        out.push_back({"n_list", n_list.to_string()});
        out.push_back({"omega", format_number(omega)});
        break;
    case Experiment::EpRatio:
        out.push_back({"n_list", n_list.to_string()});
        out.push_back({"omega", format_number(omega)});
        out.push_back({"baseline", to_string(baseline)});
        break;
    }
    return out;
}

}  // namespace otto
