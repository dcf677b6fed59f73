#pragma once

// Deployment and propagation model of a single-lane road served by a base
// station at the origin. Vehicles form a stationary renewal process whose
// headways are a constant tracking distance c plus an exponential free
// component of rate mu; all move rightwards at a common speed u.

namespace vanetcorr {

class TrafficModel {
public:
    // Intensity lambda (vehicles/m) and tracking distance c (m). Requires
    // lambda > 0, c >= 0 and lambda * c < 1.
    static TrafficModel from_intensity(double lambda, double c);
    // Rate mu (1/m) of the exponential free component and tracking distance c.
    static TrafficModel from_free_rate(double mu, double c);

    double lambda() const noexcept { return lambda_; }
    double c() const noexcept { return c_; }
    double mu() const noexcept { return mu_; }
    double lambda_c() const noexcept { return lambda_ * c_; }
    bool is_poisson() const noexcept { return c_ == 0.0; }

private:
    TrafficModel(double lambda, double c, double mu) : lambda_(lambda), c_(c), mu_(mu) {}

    double lambda_;
    double c_;
    double mu_;
};

class NetworkGeometry {
public:
    // Cell radius r0 (m), pathloss exponent eta (> 2), speed u (m/s).
    NetworkGeometry(double r0, double eta, double u);

    double r0() const noexcept { return r0_; }
    double eta() const noexcept { return eta_; }
    double u() const noexcept { return u_; }
    // Largest lag without double handover: 2 r0 / u.
    double tmax() const noexcept { return 2.0 * r0_ / u_; }

private:
    double r0_;
    double eta_;
    double u_;
};

// Lag boundaries of the pair-term regime: t1 = 2c/u, t2 = (2r0 - 2c)/u,
// tmax = 2r0/u. Throws DomainError when the regime is empty (c > r0/2).
class TimeLagWindow {
public:
    TimeLagWindow(const TrafficModel& traffic, const NetworkGeometry& geom);

    double t1() const noexcept { return t1_; }
    double t2() const noexcept { return t2_; }
    double tmax() const noexcept { return tmax_; }
    // Normalized tracking distance c / r0.
    double b() const noexcept { return b_; }

    bool in_pair_regime(double t) const noexcept { return t >= t1_ && t <= t2_; }
    bool in_range(double t) const noexcept { return t >= 0.0 && t <= tmax_; }

private:
    double t1_;
    double t2_;
    double tmax_;
    double b_;
};

// Cell-filtered pathloss: |r|^-eta outside the cell, 0 for |r| <= r0.
double pathloss(double r, const NetworkGeometry& geom) noexcept;

struct PcfOptions {
    // Separations beyond cutoff_ratio * c return the asymptote lambda^2.
    double cutoff_ratio = 64.0;
    // A band sum within this relative distance of lambda^2 is snapped to it.
    double settle_rel = 1e-12;
};

// Pair correlation function of the shifted-exponential renewal process at
// separation d >= 0. Zero below c, lambda^2 asymptotically.
double pcf(double d, const TrafficModel& traffic, const PcfOptions& opts = {});

// pcf(d_over_c * c) / (lambda * mu). Requires c > 0.
double pcf_normalized(double d_over_c, const TrafficModel& traffic, const PcfOptions& opts = {});

// Smallest multiple of c beyond which pcf is exactly lambda^2 under opts.
// Zero for the Poisson case.
double pcf_settle_distance(const TrafficModel& traffic, const PcfOptions& opts = {});

// Campbell mean 2 lambda r0^(1-eta) / (eta - 1).
double mean_interference(const TrafficModel& traffic, const NetworkGeometry& geom) noexcept;

}  // namespace vanetcorr
