#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vanetcorr/config.hpp"

namespace vanetcorr {

// One row of an output curve. `value`/`stderr_value` are empty when not
// applicable (analytic stderr, out-of-domain points).
struct CurvePoint {
    double t = 0.0;
    std::optional<double> value;
    std::optional<double> stderr_value;
    bool valid = false;
};

struct CurveSeries {
    std::string method;
    TrafficSpec traffic;
    std::vector<CurvePoint> points;
};

// Evaluates one traffic x method cell over the configured grid. Analytic
// points outside the method's lag domain are flagged, not dropped.
CurveSeries evaluate_series(const RunConfig& config, const TrafficSpec& traffic, const std::string& method);

// Header `t,value,stderr,method,lambda,c,r0,eta,u,valid`.
std::string render_csv(const RunConfig& config, const CurveSeries& series);
std::string render_json(const RunConfig& config, const CurveSeries& series);

// Writes through a temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

struct RunReport {
    std::vector<std::filesystem::path> files;
    std::filesystem::path manifest;
};

// Every traffic x method curve plus manifest.json under config.output.
RunReport run(const RunConfig& config, std::ostream& log);

// Normalized PCF curves on d/c in (0, 8] for each traffic block.
RunReport fig2(const RunConfig& config, std::ostream& log);

std::string tool_version();

}  // namespace vanetcorr
