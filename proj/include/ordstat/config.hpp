#pragma once

// Experiment files: `key = value` lines grouped under `[name]` tables, one
// experiment per table. Keys above the first table are defaults for every table.
// `#` starts a comment. Lists are comma separated and may use linspace(a, b, count),
// geomspace(a, b, count) (geometric, endpoints included) or logspace(a, b, count)
// (10^a to 10^b).

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ordstat/errors.hpp"
#include "ordstat/harness.hpp"

namespace ordstat {

struct ConfigTable {
    std::string name;
    std::map<std::string, std::string> entries;
    int line = 0;
};

struct ConfigFile {
    std::map<std::string, std::string> defaults;
    std::vector<ConfigTable> tables;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Split on commas outside parentheses.
inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw InputError("unbalanced parentheses in '" + std::string(s) + "'");
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    for (const auto& item : out) {
        if (item.empty()) throw InputError("empty list item in '" + std::string(s) + "'");
    }
    return out;
}

inline double parse_real(std::string_view token) {
    const std::string t = trim(token);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw InputError("not a number: '" + t + "'");
    }
    return v;
}

inline std::uint64_t parse_count(std::string_view token) {
    const double v = parse_real(token);
    if (!(v >= 0.0) || v > 1e18 || std::nearbyint(v) != v) {
        throw InputError("not a non-negative integer: '" + std::string(token) + "'");
    }
    return static_cast<std::uint64_t>(v);
}

inline std::vector<double> expand_real_item(const std::string& item) {
    for (const std::string_view fn : {"logspace", "linspace", "geomspace"}) {
        if (item.rfind(fn, 0) != 0) continue;
        const auto open = item.find('(');
        if (open != fn.size() || item.back() != ')') throw InputError("malformed " + std::string(fn) + ": '" + item + "'");
        const auto args = split_list(std::string_view(item).substr(open + 1, item.size() - open - 2));
        if (args.size() != 3) throw InputError(std::string(fn) + " takes (start, stop, count)");
        const double a = parse_real(args[0]);
        const double b = parse_real(args[1]);
        const std::uint64_t count = parse_count(args[2]);
        if (count < 1) throw InputError(std::string(fn) + " count must be at least 1");
        std::vector<double> out;
        for (std::uint64_t i = 0; i < count; ++i) {
            const double frac = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            if (fn == "geomspace") {
                if (!(a > 0.0 && b > 0.0)) throw InputError("geomspace endpoints must be positive");
                out.push_back(i == 0 ? a : (i + 1 == count ? b : a * std::pow(b / a, frac)));
            } else {
                const double x = a + (b - a) * frac;
                out.push_back(fn == "logspace" ? std::pow(10.0, x) : x);
            }
        }
        return out;
    }
    return {parse_real(item)};
}

inline std::vector<double> parse_real_list(std::string_view s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        for (double v : expand_real_item(item)) out.push_back(v);
    }
    return out;
}

inline std::vector<std::uint64_t> parse_count_list(std::string_view s) {
    std::vector<std::uint64_t> out;
    for (double v : parse_real_list(s)) {
        const double r = std::nearbyint(v);
        if (!(r >= 0.0) || std::abs(r - v) > 1e-6 * std::max(1.0, std::abs(v))) {
            throw InputError("grid value is not an integer: " + std::to_string(v));
        }
        out.push_back(static_cast<std::uint64_t>(r));
    }
    return out;
}

inline RankSpec parse_rank(const std::string& token) {
    const auto pos = token.find('n');
    if (pos == std::string::npos) return {parse_count(token), 0};
    const std::uint64_t num = pos == 0 ? 1 : parse_count(std::string_view(token).substr(0, pos));
    std::uint64_t div = 1;
    if (pos + 1 < token.size()) {
        if (token[pos + 1] != '/') throw InputError("malformed rank '" + token + "'");
        div = parse_count(std::string_view(token).substr(pos + 2));
    }
    if (num < 1 || div < 1) throw InputError("malformed rank '" + token + "'");
    return {num, div};
}

}  // namespace detail

inline ConfigFile parse_config(std::istream& in) {
    ConfigFile cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw InputError(where + "unterminated table header");
            const std::string name = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            if (name.empty()) throw InputError(where + "empty table name");
            for (const auto& t : cfg.tables) {
                if (t.name == name) throw InputError(where + "duplicate table [" + name + "]");
            }
            cfg.tables.push_back({name, {}, line_no});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError(where + "expected key = value");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw InputError(where + "missing key");
        auto& target = cfg.tables.empty() ? cfg.defaults : cfg.tables.back().entries;
        if (!target.emplace(key, value).second) throw InputError(where + "duplicate key '" + key + "'");
    }
    return cfg;
}

inline ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    return parse_config(in);
}

/// Merge defaults and table entries into a validated experiment. `fallback_suite`
/// applies when neither sets `suite`.
inline ExperimentConfig build_experiment(const std::string& name, const std::map<std::string, std::string>& entries,
                                         std::optional<Suite> fallback_suite = std::nullopt) {
    ExperimentConfig cfg;
    cfg.name = name;
    const auto ctx = [&](const std::string& key) { return "experiment '" + name + "', key '" + key + "': "; };
    bool have_suite = false;
    std::vector<double> gammas;
    std::vector<std::string> family_names;
    for (const auto& [key, value] : entries) {
        try {
            if (key == "suite") {
                cfg.suite = parse_suite(value);
                have_suite = true;
            } else if (key == "families" || key == "family") {
                family_names = detail::split_list(value);
            } else if (key == "gamma") {
                gammas = detail::parse_real_list(value);
            } else if (key == "n") {
                cfg.n_grid = detail::parse_count_list(value);
            } else if (key == "k") {
                for (const auto& item : detail::split_list(value)) cfg.k_grid.push_back(detail::parse_rank(item));
            } else if (key == "lambda") {
                cfg.lambda_grid = detail::parse_real_list(value);
            } else if (key == "t") {
                cfg.t_grid = detail::parse_real_list(value);
            } else if (key == "z") {
                cfg.z_grid = detail::parse_real_list(value);
            } else if (key == "checks") {
                cfg.checks = detail::split_list(value);
            } else if (key == "replicates") {
                cfg.replicates = detail::parse_count(value);
            } else if (key == "seed") {
                cfg.seed = detail::parse_count(value);
            } else if (key == "output") {
                cfg.output = value;
            } else if (key == "map_lambda") {
                cfg.map_lambda = detail::parse_real(value);
            } else if (key == "test_hook_bound_scale") {
                cfg.bound_scale = detail::parse_real(value);
            } else {
                throw InputError("unknown key");
            }
        } catch (const InputError& e) {
            throw InputError(ctx(key) + e.what());
        }
    }
    if (!have_suite) {
        if (!fallback_suite) throw InputError("experiment '" + name + "': missing suite");
        cfg.suite = *fallback_suite;
    }
    // A bare `gpd` expands over the gamma grid.
    for (const auto& f : family_names) {
        if (f == "gpd") {
            if (gammas.empty()) throw InputError("experiment '" + name + "': family gpd needs a gamma grid");
            for (double g : gammas) cfg.families.push_back(DistributionModel::gpd(g));
        } else {
            cfg.families.push_back(parse_family(f));
        }
    }
    validate(cfg);
    return cfg;
}

/// Apply `key=value` or `table.key=value` overrides; a plain key hits every table.
inline void apply_override(ConfigFile& file, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw InputError("override '" + assignment + "' is not key=value");
    const std::string lhs = detail::trim(std::string_view(assignment).substr(0, eq));
    const std::string value = detail::trim(std::string_view(assignment).substr(eq + 1));
    const auto dot = lhs.find('.');
    if (dot == std::string::npos) {
        if (lhs.empty()) throw InputError("override '" + assignment + "' has no key");
        file.defaults[lhs] = value;
        for (auto& t : file.tables) t.entries.erase(lhs);
        return;
    }
    const std::string table = lhs.substr(0, dot);
    const std::string key = lhs.substr(dot + 1);
    for (auto& t : file.tables) {
        if (t.name == table) {
            t.entries[key] = value;
            return;
        }
    }
    throw InputError("override names unknown table '" + table + "'");
}

/// Experiments of the given suite, in file order. Tables without `suite` take it.
inline std::vector<ExperimentConfig> experiments_for(const ConfigFile& file, Suite suite) {
    std::vector<ExperimentConfig> out;
    for (const auto& t : file.tables) {
        auto merged = file.defaults;
        for (const auto& [k, v] : t.entries) merged[k] = v;
        auto it = merged.find("suite");
        if (it != merged.end() && parse_suite(it->second) != suite) continue;
        out.push_back(build_experiment(t.name, merged, suite));
    }
    return out;
}

}  // namespace ordstat
