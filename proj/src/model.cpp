#include "vanetcorr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vanetcorr/errors.hpp"

namespace vanetcorr {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

TrafficModel TrafficModel::from_intensity(double lambda, double c) {
    require(std::isfinite(lambda) && lambda > 0.0, "traffic: lambda must be > 0");
    require(std::isfinite(c) && c >= 0.0, "traffic: c must be >= 0");
    require(lambda * c < 1.0, "traffic: lambda * c must be < 1 (jamming bound)");
    const double mu = c == 0.0 ? lambda : lambda / (1.0 - lambda * c);
    return TrafficModel(lambda, c, mu);
}

TrafficModel TrafficModel::from_free_rate(double mu, double c) {
    require(std::isfinite(mu) && mu > 0.0, "traffic: mu must be > 0");
    require(std::isfinite(c) && c >= 0.0, "traffic: c must be >= 0");
    const double lambda = c == 0.0 ? mu : mu / (1.0 + mu * c);
    return TrafficModel(lambda, c, mu);
}

NetworkGeometry::NetworkGeometry(double r0, double eta, double u) : r0_(r0), eta_(eta), u_(u) {
    require(std::isfinite(r0) && r0 > 0.0, "geometry: r0 must be > 0");
    require(std::isfinite(eta) && eta > 2.0, "geometry: eta must be > 2");
    require(std::isfinite(u) && u > 0.0, "geometry: u must be > 0");
}

TimeLagWindow::TimeLagWindow(const TrafficModel& traffic, const NetworkGeometry& geom)
    : t1_(2.0 * traffic.c() / geom.u()),
      t2_((2.0 * geom.r0() - 2.0 * traffic.c()) / geom.u()),
      tmax_(geom.tmax()),
      b_(traffic.c() / geom.r0()) {
    require(t1_ <= t2_, "lag window: c must not exceed r0 / 2");
}

double pathloss(double r, const NetworkGeometry& geom) noexcept {
    const double a = std::abs(r);
    if (a <= geom.r0()) return 0.0;
    return std::pow(a, -geom.eta());
}

double pcf(double d, const TrafficModel& traffic, const PcfOptions& opts) {
    if (!(d >= 0.0)) throw DomainError("pcf: separation must be >= 0");
    const double lambda = traffic.lambda();
    const double asymptote = lambda * lambda;
    if (traffic.is_poisson()) return asymptote;

    const double c = traffic.c();
    const double ratio = d / c;
    if (ratio < 1.0) return 0.0;
    if (ratio > opts.cutoff_ratio) return asymptote;

    const double mu = traffic.mu();
    const double log_mu = std::log(mu);
    const auto k = static_cast<int>(std::floor(ratio));
    double sum = 0.0;
    for (int j = 1; j <= k; ++j) {
        const double free = std::max(d - j * c, 0.0);
        if (j == 1) {
            sum += mu * std::exp(-mu * free);
            continue;
        }
        if (free == 0.0) continue;
        sum += std::exp(j * log_mu + (j - 1) * std::log(free) - mu * free - std::lgamma(static_cast<double>(j)));
    }
    const double value = lambda * sum;
    if (std::abs(value - asymptote) <= opts.settle_rel * asymptote) return asymptote;
    return value;
}

double pcf_normalized(double d_over_c, const TrafficModel& traffic, const PcfOptions& opts) {
    if (traffic.is_poisson()) throw DomainError("pcf_normalized: requires c > 0");
    return pcf(d_over_c * traffic.c(), traffic, opts) / (traffic.lambda() * traffic.mu());
}

double pcf_settle_distance(const TrafficModel& traffic, const PcfOptions& opts) {
    if (traffic.is_poisson()) return 0.0;
    const double c = traffic.c();
    const double asymptote = traffic.lambda() * traffic.lambda();
    const auto bands = static_cast<int>(std::ceil(opts.cutoff_ratio));
    constexpr int samples_per_band = 16;
    int last_unsettled = 0;
    for (int k = 1; k < bands; ++k) {
        for (int s = 0; s < samples_per_band; ++s) {
            const double d = (k + static_cast<double>(s) / samples_per_band) * c;
            if (pcf(d, traffic, opts) != asymptote) {
                last_unsettled = k;
                break;
            }
        }
    }
    return std::min<double>(last_unsettled + 1, opts.cutoff_ratio) * c;
}

double mean_interference(const TrafficModel& traffic, const NetworkGeometry& geom) noexcept {
    const double eta = geom.eta();
    return 2.0 * traffic.lambda() * std::pow(geom.r0(), 1.0 - eta) / (eta - 1.0);
}

}  // namespace vanetcorr
