#include "bincrb/scenario_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "bincrb/error.hpp"

namespace bincrb {

namespace {

constexpr std::array kKnownKeys{
    "source.x0",       "source.y0",       "source.z0",   "source.Q0",     "env.U",
    "env.sigma_v",     "env.sigma_w",     "noise.sigma", "threshold.tau", "prior.std_x",
    "prior.std_y",     "sensors.x_coords", "sensors.y_coords", "sensors.z", "sensors.file",
    "mcmc.n_s",        "mcmc.n_m",        "mcmc.n_total"};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool is_known(const std::string& key) {
    return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

std::optional<double> to_double(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const char* begin = t.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

double number(const KeyValueConfig& c, const std::string& key) {
    const auto v = to_double(c.get(key));
    if (!v) throw ConfigError(key, "expected a finite number, got '" + c.get(key) + "'");
    return *v;
}

double positive(const KeyValueConfig& c, const std::string& key) {
    const double v = number(c, key);
    if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
    return v;
}

std::vector<double> number_list(const KeyValueConfig& c, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(c.get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        const auto v = to_double(item);
        if (!v) throw ConfigError(key, "invalid list entry '" + trim(item) + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw ConfigError(key, "list is empty; at least one sensor is required");
    return out;
}

std::size_t count(const KeyValueConfig& c, const std::string& key) {
    const double v = number(c, key);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
        throw ConfigError(key, "expected a positive integer");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, std::filesystem::path base_dir) {
    KeyValueConfig cfg;
    cfg.base_dir_ = std::move(base_dir);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        const std::string text = trim(std::string_view(line).substr(0, comment));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw ConfigError("", "line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(std::string_view(text).substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(std::string_view(text).substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        cfg.set(key, trim(std::string_view(text).substr(eq + 1)));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    return parse(in, path.parent_path());
}

void KeyValueConfig::set(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(trim(assignment), "override must have the form key=value");
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    if (!is_known(key)) throw ConfigError(key, "unknown configuration key");
    entries_[key] = value;
}

const std::string& KeyValueConfig::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key, "missing required key");
    return it->second;
}

std::vector<SensorLocation> read_sensor_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("sensors.file", "cannot open " + path.string());
    std::vector<SensorLocation> sensors;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            const auto v = to_double(cell);
            if (!v) {
                numeric = false;
                break;
            }
            fields.push_back(*v);
        }
        if (!numeric && sensors.empty() && line_no == 1) continue;  // header
        if (!numeric || fields.size() < 2 || fields.size() > 3) {
            throw ConfigError("sensors.file", path.string() + " line " + std::to_string(line_no) +
                                                  ": expected x,y[,z]");
        }
        sensors.push_back({fields[0], fields[1], fields.size() == 3 ? fields[2] : 0.0});
    }
    if (sensors.empty()) throw ConfigError("sensors.file", "no sensors in " + path.string());
    return sensors;
}

Scenario build_scenario(const KeyValueConfig& c) {
    const ThetaVector truth{number(c, "source.x0"), number(c, "source.y0")};
    PlumeEnvironment env;
    env.z0 = number(c, "source.z0");
    if (env.z0 < 0.0) throw ConfigError("source.z0", "must be >= 0");
    env.Q0 = positive(c, "source.Q0");
    env.U = positive(c, "env.U");
    env.sigma_v = positive(c, "env.sigma_v");
    env.sigma_w = positive(c, "env.sigma_w");
    const double sigma = positive(c, "noise.sigma");
    const double tau = number(c, "threshold.tau");
    const double sx = positive(c, "prior.std_x");
    const double sy = positive(c, "prior.std_y");

    std::vector<SensorLocation> sensors;
    const bool has_grid = c.contains("sensors.x_coords") || c.contains("sensors.y_coords");
    if (c.contains("sensors.file")) {
        if (has_grid) throw ConfigError("sensors.file", "give either sensors.file or a coordinate grid, not both");
        std::filesystem::path p = c.get("sensors.file");
        if (p.is_relative()) p = c.base_dir() / p;
        sensors = read_sensor_csv(p);
    } else {
        PlacementSpec spec{number_list(c, "sensors.x_coords"), number_list(c, "sensors.y_coords"),
                           c.contains("sensors.z") ? number(c, "sensors.z") : 0.0};
        sensors = grid_placement(spec);
    }

    Scenario s{truth,
               env,
               NoiseModel(sigma),
               Threshold(tau),
               std::move(sensors),
               GaussianPrior(truth, Eigen::Vector2d(sx * sx, sy * sy))};
    s.validate();
    return s;
}

McmcConfig build_mcmc_config(const KeyValueConfig& c) {
    McmcConfig m;
    if (c.contains("mcmc.n_s")) m.n_init = count(c, "mcmc.n_s");
    if (c.contains("mcmc.n_m")) {
        m.n_kept = count(c, "mcmc.n_m");
        m.n_total = 2 * m.n_kept;
    }
    if (c.contains("mcmc.n_total")) m.n_total = count(c, "mcmc.n_total");
    if (m.n_total < m.n_kept) throw ConfigError("mcmc.n_total", "must be >= mcmc.n_m");
    return m;
}

}  // namespace bincrb
