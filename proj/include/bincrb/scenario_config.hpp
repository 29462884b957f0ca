#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "bincrb/mcmc.hpp"
#include "bincrb/scenario.hpp"

namespace bincrb {

/// Flat `key = value` configuration. `[section]` headers prefix subsequent
/// keys with `section.`; `#` and `;` start comments. Every error is a
/// ConfigError naming the offending key.
///
/// Recognised keys:
///   source.x0 source.y0 source.z0 source.Q0
///   env.U env.sigma_v env.sigma_w
///   noise.sigma threshold.tau prior.std_x prior.std_y
///   sensors.x_coords sensors.y_coords sensors.z   (comma-separated grid)
///   sensors.file                                  (CSV rows x,y,z; relative to the config)
///   mcmc.n_s mcmc.n_m mcmc.n_total                (optional)
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in, std::filesystem::path base_dir = {});
    static KeyValueConfig load(const std::filesystem::path& path);

    /// Apply `key=value`; the key must be a recognised one.
    void set(std::string_view assignment);
    void set(const std::string& key, const std::string& value);

    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

private:
    std::map<std::string, std::string> entries_;
    std::filesystem::path base_dir_;
};

Scenario build_scenario(const KeyValueConfig& config);

/// MCMC settings from the optional `mcmc.*` keys; unset keys keep defaults.
McmcConfig build_mcmc_config(const KeyValueConfig& config);

/// Rows `x,y[,z]`; a non-numeric first line is treated as a header.
std::vector<SensorLocation> read_sensor_csv(const std::filesystem::path& path);

}  // namespace bincrb
