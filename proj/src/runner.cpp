#include "vanetcorr/runner.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vanetcorr/analytic.hpp"
#include "vanetcorr/errors.hpp"
#include "vanetcorr/model.hpp"
#include "vanetcorr/sim.hpp"

#ifndef VANETCORR_VERSION
#define VANETCORR_VERSION "unknown"
#endif

namespace vanetcorr {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string extension(OutputFormat format) { return format == OutputFormat::Json ? ".json" : ".csv"; }

std::string curve_file_name(const CurveSeries& series, OutputFormat format) {
    return "rho_" + series.method + "_lambda" + num(series.traffic.lambda) + "_c" + num(series.traffic.c) +
           extension(format);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json manifest_head(const RunConfig& config, std::string_view command) {
    return json{{"tool", "vanetcorr"},
                {"version", tool_version()},
                {"command", command},
                {"config", serialize_config(config)},
                {"seed", config.seed},
                {"partitions", config.n_partitions},
                {"blocks", config.n_blocks},
                {"n_samples", config.n_samples}};
}

}  // namespace

std::string tool_version() { return VANETCORR_VERSION; }

CurveSeries evaluate_series(const RunConfig& config, const TrafficSpec& spec, const std::string& method) {
    const auto traffic = TrafficModel::from_intensity(spec.lambda, spec.c);
    const NetworkGeometry geom(config.r0, config.eta, config.u);
    CurveSeries series{method, spec, {}};
    const auto grid = config.t_grid.values();

    if (method == kSimulationMethod) {
        EstimateOptions options;
        options.n_samples = config.n_samples;
        options.seed = config.seed;
        options.n_partitions = config.n_partitions;
        options.n_blocks = config.n_blocks;
        for (double t : grid) {
            CurvePoint point{t, std::nullopt, std::nullopt, t >= 0.0 && t <= geom.tmax()};
            if (point.valid) {
                const CorrelationEstimate est = estimate(traffic, geom, t, options);
                point.value = est.rho;
                point.stderr_value = est.se_rho;
            }
            series.points.push_back(point);
        }
        return series;
    }

    const Method analytic = parse_method(method);
    const auto [lo, hi] = method_domain(analytic, traffic, geom);
    std::optional<double> exact_variance;
    for (double t : grid) {
        CurvePoint point{t, std::nullopt, std::nullopt, t >= lo && t <= hi};
        if (point.valid) {
            if (analytic == Method::ExactQuadrature) {
                if (!exact_variance) exact_variance = variance(traffic, geom, VarianceMethod::ExactQuadrature);
                point.value = covariance(t, traffic, geom, analytic).covariance / *exact_variance;
            } else {
                point.value = rho(t, traffic, geom, analytic);
            }
        }
        series.points.push_back(point);
    }
    return series;
}

std::string render_csv(const RunConfig& config, const CurveSeries& series) {
    std::ostringstream out;
    out << "t,value,stderr,method,lambda,c,r0,eta,u,valid\n";
    for (const auto& p : series.points) {
        out << num(p.t) << ',' << (p.value ? num(*p.value) : "") << ',' << (p.stderr_value ? num(*p.stderr_value) : "")
            << ',' << series.method << ',' << num(series.traffic.lambda) << ',' << num(series.traffic.c) << ','
            << num(config.r0) << ',' << num(config.eta) << ',' << num(config.u) << ',' << (p.valid ? "true" : "false")
            << '\n';
    }
    return out.str();
}

std::string render_json(const RunConfig& config, const CurveSeries& series) {
    json points = json::array();
    for (const auto& p : series.points)
        points.push_back(
            {{"t", p.t}, {"value", optional_number(p.value)}, {"stderr", optional_number(p.stderr_value)}, {"valid", p.valid}});
    const json doc{{"method", series.method},
                   {"lambda", series.traffic.lambda},
                   {"c", series.traffic.c},
                   {"r0", config.r0},
                   {"eta", config.eta},
                   {"u", config.u},
                   {"points", points}};
    return doc.dump(2) + "\n";
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

RunReport run(const RunConfig& config, std::ostream& log) {
    validate(config);
    const std::filesystem::path dir(config.output);
    RunReport report;
    json manifest = manifest_head(config, "run");
    manifest["curves"] = json::array();

    for (const auto& traffic : config.traffic) {
        for (const auto& method : config.methods) {
            log << "evaluating " << method << " at lambda=" << num(traffic.lambda) << " c=" << num(traffic.c) << '\n';
            const CurveSeries series = evaluate_series(config, traffic, method);
            const auto path = dir / curve_file_name(series, config.format);
            write_atomically(path, config.format == OutputFormat::Json ? render_json(config, series)
                                                                      : render_csv(config, series));
            report.files.push_back(path);

            json valid = json::array();
            for (const auto& p : series.points) valid.push_back(p.valid);
            json entry{{"file", path.filename().string()},
                       {"method", method},
                       {"lambda", traffic.lambda},
                       {"c", traffic.c},
                       {"valid", valid}};
            if (method == kSimulationMethod) {
                const auto model = TrafficModel::from_intensity(traffic.lambda, traffic.c);
                const NetworkGeometry geom(config.r0, config.eta, config.u);
                entry["truncation_bias_bound"] = truncation_bias_bound(model, geom, config.t_grid.hi);
            }
            manifest["curves"].push_back(entry);
        }
    }

    report.manifest = dir / "manifest.json";
    write_atomically(report.manifest, manifest.dump(2) + "\n");
    return report;
}

RunReport fig2(const RunConfig& config, std::ostream& log) {
    validate(config);
    const std::filesystem::path dir(config.output);
    RunReport report;
    json manifest = manifest_head(config, "fig2");
    manifest["curves"] = json::array();
    constexpr double kMaxRatio = 8.0;

    for (const auto& spec : config.traffic) {
        if (spec.c == 0.0) throw ConfigError(0, "traffic", "fig2 needs c > 0 in every traffic block");
        const auto traffic = TrafficModel::from_intensity(spec.lambda, spec.c);
        const double asymptote = 1.0 - traffic.lambda_c();
        log << "normalized pcf at lambda=" << num(spec.lambda) << " c=" << num(spec.c) << '\n';

        const auto n = config.fig2_points;
        std::vector<std::pair<double, double>> rows;
        for (std::size_t i = 1; i <= n; ++i) {
            const double ratio = kMaxRatio * static_cast<double>(i) / static_cast<double>(n);
            rows.emplace_back(ratio, pcf_normalized(ratio, traffic));
        }

        std::string body;
        if (config.format == OutputFormat::Json) {
            json points = json::array();
            for (const auto& [ratio, value] : rows)
                points.push_back({{"d_over_c", ratio}, {"value", value}, {"asymptote", asymptote}});
            body = json{{"lambda", spec.lambda}, {"c", spec.c}, {"points", points}}.dump(2) + "\n";
        } else {
            std::ostringstream out;
            out << "d_over_c,value,asymptote,lambda,c\n";
            for (const auto& [ratio, value] : rows)
                out << num(ratio) << ',' << num(value) << ',' << num(asymptote) << ',' << num(spec.lambda) << ','
                    << num(spec.c) << '\n';
            body = out.str();
        }
        const auto path =
            dir / ("fig2_pcf_lambda" + num(spec.lambda) + "_c" + num(spec.c) + extension(config.format));
        write_atomically(path, body);
        report.files.push_back(path);
        manifest["curves"].push_back({{"file", path.filename().string()}, {"lambda", spec.lambda}, {"c", spec.c}});
    }

    report.manifest = dir / "manifest_fig2.json";
    write_atomically(report.manifest, manifest.dump(2) + "\n");
    return report;
}

}  // namespace vanetcorr
