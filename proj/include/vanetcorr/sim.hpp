#pragma once

// Monte Carlo sampling of the stationary vehicle process and estimation of
// interference moments and the lag-t correlation coefficient.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vanetcorr/model.hpp"
#include "vanetcorr/rng.hpp"

namespace vanetcorr {

struct ObservationWindow {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
};

struct VehicleConfiguration {
    std::vector<double> positions;  // strictly ascending, inside window
    ObservationWindow window;
};

// Stationary realization on the window. The first vehicle sits at an
// equilibrium forward-recurrence distance from window.lo; later headways
// are c + Exp(mu). Requires window length >= 100 / lambda.
VehicleConfiguration sample_configuration(const TrafficModel& traffic, const ObservationWindow& window,
                                          CounterRng& rng);

// As above, reusing the storage of `out`.
void sample_configuration_into(const TrafficModel& traffic, const ObservationWindow& window, CounterRng& rng,
                               VehicleConfiguration& out);

// Sum of fading * pathloss over vehicles displaced by `shift`. Fading is
// requested only for vehicles outside the cell, in position order.
template <class Fading>
double interference_at(const VehicleConfiguration& config, double shift, const NetworkGeometry& geom,
                       Fading&& fading) {
    double total = 0.0;
    for (double x : config.positions) {
        const double gain = pathloss(x + shift, geom);
        if (gain > 0.0) total += fading() * gain;
    }
    return total;
}

// Rayleigh fading: unit-mean exponential power gains drawn from rng.
double interference_at(const VehicleConfiguration& config, double shift, const NetworkGeometry& geom,
                       CounterRng& rng);

struct InterferencePair {
    double i_tau = 0.0;
    double i_tau_t = 0.0;
};

// Window [-(W + u t), W] with W = r0 + u tmax + 50 / lambda, covering both
// slots of a lag-t pair.
ObservationWindow pair_window(const TrafficModel& traffic, const NetworkGeometry& geom, double t);

// Bound on the mean interference lost by truncating at distance W on both
// sides: 2 lambda W^(1-eta) / (eta - 1).
double truncation_bias_bound(const TrafficModel& traffic, const NetworkGeometry& geom, double t);

// One configuration observed at shifts 0 and u t with independent fading.
InterferencePair sample_pair(const TrafficModel& traffic, const NetworkGeometry& geom, double t,
                             const ObservationWindow& window, CounterRng& rng);

struct EstimateOptions {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    // Work units; sample i always draws from stream i regardless of layout.
    unsigned n_partitions = 1;
    // Contiguous sample blocks left out one at a time by the jackknife.
    unsigned n_blocks = 20;
    // 0 = hardware concurrency.
    unsigned max_threads = 0;
};

struct CorrelationEstimate {
    std::size_t n = 0;
    double mean = 0.0;        // pooled over both slots
    double variance = 0.0;    // pooled over both slots
    double covariance = 0.0;
    double rho = 0.0;         // covariance / variance
    double se_mean = 0.0;
    double se_variance = 0.0;
    double se_covariance = 0.0;
    double se_rho = 0.0;
    double truncation_bias_bound = 0.0;
};

CorrelationEstimate estimate(const TrafficModel& traffic, const NetworkGeometry& geom, double t,
                             const EstimateOptions& options);

struct HistogramBins {
    std::size_t count = 32;
    double width = 1.0;
};

struct PairDistanceHistogram {
    double bin_width = 0.0;
    double window_length = 0.0;
    std::size_t realizations = 0;
    std::vector<std::uint64_t> counts;  // unordered pairs per bin, all realizations
    std::vector<double> density;        // pair density estimate per bin
    std::vector<double> std_error;

    double lower_edge(std::size_t bin) const noexcept { return static_cast<double>(bin) * bin_width; }
    double upper_edge(std::size_t bin) const noexcept { return static_cast<double>(bin + 1) * bin_width; }
};

// Pair separations up to bins.count * bins.width from independent
// realizations on `window`, normalized to pair density. Realization r uses
// stream r of `seed`.
PairDistanceHistogram pair_distance_histogram(const TrafficModel& traffic, const ObservationWindow& window,
                                              std::size_t n_realizations, const HistogramBins& bins,
                                              std::uint64_t seed);

// Expected histogram density for a bin [lo, hi]: the PCF averaged with the
// (L - s) weight of pairs that fit in a window of length L.
double pcf_bin_average(const TrafficModel& traffic, double window_length, double lo, double hi);

}  // namespace vanetcorr
