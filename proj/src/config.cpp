#include "vanetcorr/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vanetcorr/analytic.hpp"
#include "vanetcorr/errors.hpp"
#include "vanetcorr/model.hpp"

namespace vanetcorr {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::size_t line, const std::string& field) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError(line, field, "expected a number, got '" + std::string(text) + "'");
    return value;
}

template <class Int>
Int parse_integer(std::string_view text, std::size_t line, const std::string& field) {
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(line, field, "expected a non-negative integer, got '" + std::string(text) + "'");
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool is_known_method(std::string_view name) {
    if (name == kSimulationMethod) return true;
    try {
        parse_method(name);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

void validate_with_lines(const RunConfig& config, const std::map<std::string, std::size_t>& lines,
                         const std::vector<std::size_t>& traffic_lines) {
    auto line_of = [&](const std::string& field) {
        const auto it = lines.find(field);
        return it == lines.end() ? std::size_t{0} : it->second;
    };

    if (config.traffic.empty()) throw ConfigError(0, "traffic", "at least one [traffic] block is required");
    for (std::size_t i = 0; i < config.traffic.size(); ++i) {
        try {
            TrafficModel::from_intensity(config.traffic[i].lambda, config.traffic[i].c);
        } catch (const DomainError& e) {
            throw ConfigError(i < traffic_lines.size() ? traffic_lines[i] : 0, "traffic", e.what());
        }
    }
    try {
        NetworkGeometry(config.r0, config.eta, config.u);
    } catch (const DomainError& e) {
        throw ConfigError(std::max({line_of("r0"), line_of("eta"), line_of("u")}), "geometry", e.what());
    }
    if (config.t_grid.points == 0) throw ConfigError(line_of("t_points"), "t_points", "grid must be nonempty");
    if (!(config.t_grid.lo >= 0.0) || !(config.t_grid.hi >= config.t_grid.lo))
        throw ConfigError(line_of("t_hi"), "t_grid", "requires 0 <= t_lo <= t_hi");
    if (config.t_grid.points == 1 && config.t_grid.lo != config.t_grid.hi)
        throw ConfigError(line_of("t_points"), "t_points", "a single-point grid needs t_lo == t_hi");
    if (config.methods.empty()) throw ConfigError(line_of("methods"), "methods", "at least one method is required");
    std::set<std::string> seen;
    for (const auto& m : config.methods) {
        if (!is_known_method(m)) throw ConfigError(line_of("methods"), "methods", "unknown method '" + m + "'");
        if (!seen.insert(m).second) throw ConfigError(line_of("methods"), "methods", "duplicate method '" + m + "'");
    }
    if (seen.contains(std::string(kSimulationMethod)) && config.n_samples < 1000)
        throw ConfigError(line_of("n_samples"), "n_samples", "simulation needs n_samples >= 1000");
    if (config.n_partitions < 1) throw ConfigError(line_of("partitions"), "partitions", "must be >= 1");
    if (config.n_blocks < 2) throw ConfigError(line_of("blocks"), "blocks", "must be >= 2");
    if (config.fig2_points < 1) throw ConfigError(line_of("fig2_points"), "fig2_points", "must be >= 1");
    if (config.output.empty()) throw ConfigError(line_of("output"), "output", "must not be empty");
}

}  // namespace

std::vector<double> TimeGrid::values() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    if (points > 1) out.back() = hi;
    return out;
}

std::string_view to_string(OutputFormat format) noexcept { return format == OutputFormat::Json ? "json" : "csv"; }

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError(0, "format", "expected csv or json, got '" + std::string(name) + "'");
}

RunConfig default_config() {
    RunConfig config;
    config.traffic = {TrafficSpec{0.05, 4.0}};
    config.methods = {"ppp", "expansion", "pcf-approx", "simulation"};
    return config;
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::map<std::string, std::size_t> lines;
    std::vector<std::size_t> traffic_lines;
    bool in_traffic = false;
    std::set<std::string> block_keys;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        std::string_view line = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[traffic]") throw ConfigError(line_no, std::string(line), "unknown section");
            if (in_traffic && block_keys.size() != 2)
                throw ConfigError(traffic_lines.back(), "traffic", "block needs both lambda and c");
            config.traffic.emplace_back();
            traffic_lines.push_back(line_no);
            block_keys.clear();
            in_traffic = true;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "", "missing key");
        if (value.empty()) throw ConfigError(line_no, key, "missing value");

        if (key == "lambda" || key == "c") {
            if (!in_traffic) throw ConfigError(line_no, key, "only allowed inside a [traffic] block");
            if (!block_keys.insert(key).second) throw ConfigError(line_no, key, "repeated in the same block");
            const double v = parse_double(value, line_no, key);
            (key == "lambda" ? config.traffic.back().lambda : config.traffic.back().c) = v;
            continue;
        }

        if (lines.contains(key)) throw ConfigError(line_no, key, "repeated key");
        lines[key] = line_no;
        if (key == "r0") config.r0 = parse_double(value, line_no, key);
        else if (key == "eta") config.eta = parse_double(value, line_no, key);
        else if (key == "u") config.u = parse_double(value, line_no, key);
        else if (key == "t_lo") config.t_grid.lo = parse_double(value, line_no, key);
        else if (key == "t_hi") config.t_grid.hi = parse_double(value, line_no, key);
        else if (key == "t_points") config.t_grid.points = parse_integer<std::size_t>(value, line_no, key);
        else if (key == "n_samples") config.n_samples = parse_integer<std::size_t>(value, line_no, key);
        else if (key == "seed") config.seed = parse_integer<std::uint64_t>(value, line_no, key);
        else if (key == "partitions") config.n_partitions = parse_integer<unsigned>(value, line_no, key);
        else if (key == "blocks") config.n_blocks = parse_integer<unsigned>(value, line_no, key);
        else if (key == "fig2_points") config.fig2_points = parse_integer<std::size_t>(value, line_no, key);
        else if (key == "output") config.output = std::string(value);
        else if (key == "format") {
            try {
                config.format = parse_format(value);
            } catch (const ConfigError&) {
                throw ConfigError(line_no, key, "expected csv or json");
            }
        } else if (key == "methods") {
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                if (item.empty()) throw ConfigError(line_no, key, "empty method name");
                config.methods.emplace_back(item);
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
        } else {
            throw ConfigError(line_no, key, "unknown key");
        }
    }

    if (in_traffic && block_keys.size() != 2)
        throw ConfigError(traffic_lines.back(), "traffic", "block needs both lambda and c");
    validate_with_lines(config, lines, traffic_lines);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "config", "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate(const RunConfig& config) { validate_with_lines(config, {}, {}); }

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    out << "r0 = " << format_double(config.r0) << '\n'
        << "eta = " << format_double(config.eta) << '\n'
        << "u = " << format_double(config.u) << '\n'
        << "t_lo = " << format_double(config.t_grid.lo) << '\n'
        << "t_hi = " << format_double(config.t_grid.hi) << '\n'
        << "t_points = " << config.t_grid.points << '\n'
        << "methods = ";
    for (std::size_t i = 0; i < config.methods.size(); ++i) out << (i ? ", " : "") << config.methods[i];
    out << '\n'
        << "n_samples = " << config.n_samples << '\n'
        << "seed = " << config.seed << '\n'
        << "partitions = " << config.n_partitions << '\n'
        << "blocks = " << config.n_blocks << '\n'
        << "fig2_points = " << config.fig2_points << '\n'
        << "output = " << config.output << '\n'
        << "format = " << to_string(config.format) << '\n';
    for (const auto& t : config.traffic)
        out << "\n[traffic]\nlambda = " << format_double(t.lambda) << "\nc = " << format_double(t.c) << '\n';
    return out.str();
}

}  // namespace vanetcorr
