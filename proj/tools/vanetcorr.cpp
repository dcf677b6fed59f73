#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vanetcorr/config.hpp"
#include "vanetcorr/errors.hpp"
#include "vanetcorr/runner.hpp"

namespace {

constexpr int kConfigFailure = 1;
constexpr int kNumericFailure = 2;

struct Overrides {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> partitions;
    std::optional<std::string> format;
};

void add_common(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "Configuration file (built-in defaults if omitted)")
        ->check(CLI::ExistingFile);
    cmd.add_option("--out", o.out, "Output directory");
    cmd.add_option("--seed", o.seed, "Simulation seed, overrides the config");
    cmd.add_option("--partitions", o.partitions, "Simulation partitions, overrides the config");
    cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

vanetcorr::RunConfig resolve(const Overrides& o) {
    auto config = o.config_path.empty() ? vanetcorr::default_config() : vanetcorr::load_config(o.config_path);
    if (o.out) config.output = *o.out;
    if (o.seed) config.seed = *o.seed;
    if (o.partitions) config.n_partitions = *o.partitions;
    if (o.format) config.format = vanetcorr::parse_format(*o.format);
    vanetcorr::validate(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal interference correlation for vehicular networks with shifted-exponential headways"};
    app.set_version_flag("--version", vanetcorr::tool_version());
    app.require_subcommand(1);

    Overrides overrides;
    auto* run = app.add_subcommand("run", "Evaluate every traffic x method curve over the time-lag grid");
    auto* fig2 = app.add_subcommand("fig2", "Normalized pair correlation curves against d/c");
    auto* print = app.add_subcommand("print-config", "Print the resolved configuration in canonical form");
    for (auto* cmd : {run, fig2, print}) add_common(*cmd, overrides);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = resolve(overrides);
        if (print->parsed()) {
            std::cout << vanetcorr::serialize_config(config);
            return 0;
        }
        const auto report = run->parsed() ? vanetcorr::run(config, std::cerr) : vanetcorr::fig2(config, std::cerr);
        for (const auto& file : report.files) std::cout << file.string() << '\n';
        std::cout << report.manifest.string() << '\n';
        return 0;
    } catch (const vanetcorr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const vanetcorr::ConvergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const vanetcorr::EstimationError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigFailure;
    }
}
