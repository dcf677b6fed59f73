#pragma once

// Run configuration: flat `key = value` text. Each `[traffic]` header opens a
// block holding `lambda` and `c`; every other key is global. `#` starts a
// comment.
//
//   r0 = 150
//   methods = ppp, expansion, pcf-approx, simulation
//   [traffic]
//   lambda = 0.05
//   c = 4

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vanetcorr {

struct TrafficSpec {
    double lambda = 0.05;
    double c = 4.0;

    bool operator==(const TrafficSpec&) const = default;
};

struct TimeGrid {
    double lo = 0.0;
    double hi = 30.0;
    std::size_t points = 31;

    std::vector<double> values() const;
    bool operator==(const TimeGrid&) const = default;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::vector<TrafficSpec> traffic;
    double r0 = 150.0;
    double eta = 3.0;
    double u = 10.0;
    TimeGrid t_grid;
    // Analytic method names plus "simulation".
    std::vector<std::string> methods;
    std::size_t n_samples = 100000;
    std::uint64_t seed = 20180901;
    unsigned n_partitions = 20;
    unsigned n_blocks = 20;
    std::string output = "out";
    OutputFormat format = OutputFormat::Csv;
    std::size_t fig2_points = 160;

    bool operator==(const RunConfig&) const = default;
};

inline constexpr std::string_view kSimulationMethod = "simulation";

// eta = 3, r0 = 150 m, c = 4 m, u = 10 m/s, one traffic block at lambda = 0.05,
// methods {ppp, expansion, pcf-approx, simulation}.
RunConfig default_config();

// Parses and validates; throws ConfigError carrying the offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Throws ConfigError (line 0) naming the offending field.
void validate(const RunConfig& config);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

std::string_view to_string(OutputFormat format) noexcept;
OutputFormat parse_format(std::string_view name);

}  // namespace vanetcorr
