#include "vanetcorr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "vanetcorr/errors.hpp"
#include "vanetcorr/moments.hpp"
#include "vanetcorr/quadrature.hpp"

namespace vanetcorr {

namespace {

void validate_window(const TrafficModel& traffic, const ObservationWindow& window) {
    if (!std::isfinite(window.lo) || !std::isfinite(window.hi) || !(window.hi > window.lo))
        throw DomainError("window: requires finite lo < hi");
    if (window.length() < 100.0 / traffic.lambda())
        throw DomainError("window: length must be >= 100 / lambda (got " + std::to_string(window.length()) + ")");
}

struct Statistics {
    double mean;
    double variance;
    double covariance;
    double rho;
};

Statistics statistics_of(const BivariateMoments& m) {
    Statistics s{};
    s.mean = 0.5 * (m.mean_x() + m.mean_y());
    s.variance = 0.5 * (m.variance_x() + m.variance_y());
    s.covariance = m.covariance();
    if (!(s.variance > 0.0)) throw EstimationError("estimate: degenerate (zero) variance");
    s.rho = s.covariance / s.variance;
    return s;
}

double jackknife_se(const std::vector<double>& leave_one_out) {
    const double b = static_cast<double>(leave_one_out.size());
    double mean = 0.0;
    for (double v : leave_one_out) mean += v;
    mean /= b;
    double ss = 0.0;
    for (double v : leave_one_out) ss += (v - mean) * (v - mean);
    return std::sqrt((b - 1.0) / b * ss);
}

}  // namespace

void sample_configuration_into(const TrafficModel& traffic, const ObservationWindow& window, CounterRng& rng,
                               VehicleConfiguration& out) {
    validate_window(traffic, window);
    out.window = window;
    out.positions.clear();
    const double c = traffic.c();
    const double mu = traffic.mu();

    // Forward-recurrence delay: density lambda on [0, c), lambda e^{-mu (d-c)} beyond.
    double x = window.lo;
    if (c > 0.0 && rng.uniform() < traffic.lambda_c())
        x += c * rng.uniform();
    else
        x += c + rng.exponential(mu);

    while (x <= window.hi) {
        out.positions.push_back(x);
        x += c + rng.exponential(mu);
    }
}

VehicleConfiguration sample_configuration(const TrafficModel& traffic, const ObservationWindow& window,
                                          CounterRng& rng) {
    VehicleConfiguration out;
    sample_configuration_into(traffic, window, rng, out);
    return out;
}

double interference_at(const VehicleConfiguration& config, double shift, const NetworkGeometry& geom,
                       CounterRng& rng) {
    return interference_at(config, shift, geom, [&rng] { return rng.exponential(1.0); });
}

ObservationWindow pair_window(const TrafficModel& traffic, const NetworkGeometry& geom, double t) {
    const double half = geom.r0() + geom.u() * geom.tmax() + 50.0 / traffic.lambda();
    return {-(half + geom.u() * t), half};
}

double truncation_bias_bound(const TrafficModel& traffic, const NetworkGeometry& geom, double t) {
    const double reach = pair_window(traffic, geom, t).hi;
    return 2.0 * traffic.lambda() * std::pow(reach, 1.0 - geom.eta()) / (geom.eta() - 1.0);
}

InterferencePair sample_pair(const TrafficModel& traffic, const NetworkGeometry& geom, double t,
                             const ObservationWindow& window, CounterRng& rng) {
    const VehicleConfiguration config = sample_configuration(traffic, window, rng);
    InterferencePair pair;
    pair.i_tau = interference_at(config, 0.0, geom, rng);
    pair.i_tau_t = interference_at(config, t * geom.u(), geom, rng);
    return pair;
}

CorrelationEstimate estimate(const TrafficModel& traffic, const NetworkGeometry& geom, double t,
                             const EstimateOptions& options) {
    const std::size_t n = options.n_samples;
    if (n < 1000) throw DomainError("estimate: n_samples must be >= 1000");
    if (options.n_blocks < 2) throw DomainError("estimate: n_blocks must be >= 2");
    if (options.n_partitions < 1) throw DomainError("estimate: n_partitions must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("estimate: t must be >= 0");

    const ObservationWindow window = pair_window(traffic, geom, t);
    validate_window(traffic, window);
    const std::size_t blocks = options.n_blocks;
    const std::size_t partitions = options.n_partitions;
    const double shift = t * geom.u();

    // partial[p][b]: samples of partition p that fall in jackknife block b.
    std::vector<std::vector<BivariateMoments>> partial(partitions, std::vector<BivariateMoments>(blocks));
    auto run_partition = [&](std::size_t p) {
        const std::size_t begin = p * n / partitions;
        const std::size_t end = (p + 1) * n / partitions;
        VehicleConfiguration config;
        for (std::size_t i = begin; i < end; ++i) {
            CounterRng rng(options.seed, i);
            sample_configuration_into(traffic, window, rng, config);
            const double now = interference_at(config, 0.0, geom, rng);
            const double later = interference_at(config, shift, geom, rng);
            partial[p][i * blocks / n].add(now, later);
        }
    };

    unsigned threads = options.max_threads != 0 ? options.max_threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(partitions));
    if (threads == 1) {
        for (std::size_t p = 0; p < partitions; ++p) run_partition(p);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t p = next++; p < partitions; p = next++) run_partition(p);
            });
    }

    std::vector<BivariateMoments> per_block(blocks);
    for (std::size_t p = 0; p < partitions; ++p)
        for (std::size_t b = 0; b < blocks; ++b) per_block[b].merge(partial[p][b]);

    BivariateMoments all;
    for (const auto& m : per_block) all.merge(m);
    const Statistics full = statistics_of(all);

    std::vector<double> mean_loo, var_loo, cov_loo, rho_loo;
    for (std::size_t left_out = 0; left_out < blocks; ++left_out) {
        BivariateMoments rest;
        for (std::size_t b = 0; b < blocks; ++b)
            if (b != left_out) rest.merge(per_block[b]);
        const Statistics s = statistics_of(rest);
        mean_loo.push_back(s.mean);
        var_loo.push_back(s.variance);
        cov_loo.push_back(s.covariance);
        rho_loo.push_back(s.rho);
    }

    CorrelationEstimate out;
    out.n = n;
    out.mean = full.mean;
    out.variance = full.variance;
    out.covariance = full.covariance;
    out.rho = full.rho;
    out.se_mean = jackknife_se(mean_loo);
    out.se_variance = jackknife_se(var_loo);
    out.se_covariance = jackknife_se(cov_loo);
    out.se_rho = jackknife_se(rho_loo);
    out.truncation_bias_bound = truncation_bias_bound(traffic, geom, t);
    return out;
}

PairDistanceHistogram pair_distance_histogram(const TrafficModel& traffic, const ObservationWindow& window,
                                              std::size_t n_realizations, const HistogramBins& bins,
                                              std::uint64_t seed) {
    validate_window(traffic, window);
    if (bins.count == 0 || !(bins.width > 0.0)) throw DomainError("histogram: needs at least one bin of width > 0");
    const double reach = static_cast<double>(bins.count) * bins.width;
    const double length = window.length();
    if (!(reach < length)) throw DomainError("histogram: bins must fit inside the window");
    if (n_realizations < 2) throw DomainError("histogram: needs at least two realizations");

    PairDistanceHistogram out;
    out.bin_width = bins.width;
    out.window_length = length;
    out.realizations = n_realizations;
    out.counts.assign(bins.count, 0);

    // Expected unordered pairs per bin = pcf * width * (L - midpoint).
    std::vector<double> exposure(bins.count);
    for (std::size_t b = 0; b < bins.count; ++b)
        exposure[b] = bins.width * (length - (static_cast<double>(b) + 0.5) * bins.width);

    std::vector<RunningMoments> per_bin(bins.count);
    std::vector<std::uint64_t> local(bins.count);
    VehicleConfiguration config;
    for (std::size_t r = 0; r < n_realizations; ++r) {
        CounterRng rng(seed, r);
        sample_configuration_into(traffic, window, rng, config);
        std::fill(local.begin(), local.end(), 0);
        const auto& x = config.positions;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                const double d = x[j] - x[i];
                if (d >= reach) break;
                ++local[static_cast<std::size_t>(d / bins.width)];
            }
        }
        for (std::size_t b = 0; b < bins.count; ++b) {
            out.counts[b] += local[b];
            per_bin[b].add(static_cast<double>(local[b]) / exposure[b]);
        }
    }

    out.density.resize(bins.count);
    out.std_error.resize(bins.count);
    for (std::size_t b = 0; b < bins.count; ++b) {
        out.density[b] = per_bin[b].mean();
        out.std_error[b] = std::sqrt(per_bin[b].variance() / static_cast<double>(n_realizations));
    }
    return out;
}

double pcf_bin_average(const TrafficModel& traffic, double window_length, double lo, double hi) {
    if (!(hi > lo) || !(lo >= 0.0) || !(hi <= window_length)) throw DomainError("pcf_bin_average: invalid bin");
    std::vector<double> points{lo};
    if (!traffic.is_poisson())
        for (double k = std::floor(lo / traffic.c()) + 1.0; k * traffic.c() < hi; k += 1.0)
            points.push_back(k * traffic.c());
    points.push_back(hi);
    const double scale = traffic.lambda() * traffic.lambda();
    auto weighted = [&](double s) { return pcf(s, traffic) / scale * (window_length - s); };
    const double numerator = integrate_pieces(weighted, points).value;
    const double weight = (hi - lo) * (window_length - 0.5 * (lo + hi));
    return scale * numerator / weight;
}

}  // namespace vanetcorr
