#pragma once

// Analytic mean, variance, covariance and temporal correlation coefficient of
// the interference seen by the base station.
//
// Covariance at lag t decomposes as
//   cov(t) = J(t) + I(t) - E{I}^2,
// where J is the same-vehicle term and I the distinct-pair term. I is split
// by pair separation into I_{>2c} (PCF approximated by lambda^2) and I_{<2c}
// (exact single-band PCF). Unless stated otherwise the pair-term routines are
// valid for t in [t1, t2] only; see TimeLagWindow.

#include <string_view>
#include <utility>
#include <vector>

#include "vanetcorr/model.hpp"
#include "vanetcorr/quadrature.hpp"

namespace vanetcorr {

enum class Method {
    // Full PCF (every band up to the asymptote cutoff) integrated numerically.
    ExactQuadrature,
    // Closed-form I_{>2c} plus numerically integrated exact I_{<2c}.
    PcfApprox,
    // Small lambda*c, small c/r0 expansions.
    Expansion,
    // Poisson baseline, independent of lambda.
    Ppp,
};

std::string_view to_string(Method method) noexcept;
// Accepts "exact-quadrature", "pcf-approx", "expansion", "ppp".
Method parse_method(std::string_view name);

enum class VarianceMethod { Approx, Ppp, ExactQuadrature };

struct CovarianceBreakdown {
    double j_term = 0.0;
    double i_gt2c = 0.0;
    double i_lt2c = 0.0;
    double mean_sq = 0.0;
    // j_term + i_gt2c + i_lt2c - mean_sq, assembled without forming the
    // difference of the two O(E{I}^2) terms.
    double covariance = 0.0;
    Method method = Method::PcfApprox;
};

struct AnalyticCurve {
    std::vector<double> t_grid;
    std::vector<double> values;
    Method method;
    TrafficModel traffic;
    NetworkGeometry geom;
};

// Lag interval on which a method is defined: [t1, t2] for the pair-regime
// methods, [0, tmax] for exact quadrature and the Poisson baseline.
std::pair<double, double> method_domain(Method method, const TrafficModel& traffic, const NetworkGeometry& geom);

// Autocorrelation of the cell-filtered pathloss, int g(x) g(x + s) dx over the
// whole line. Even in s.
double pathloss_autocorrelation(double s, const NetworkGeometry& geom, const QuadratureSpec& spec = {});

// Same-vehicle term, t in [0, tmax].
double j_term(double t, const TrafficModel& traffic, const NetworkGeometry& geom);

double i_gt2c_exact(double t, const TrafficModel& traffic, const NetworkGeometry& geom);
// i_gt2c_exact - E{I}^2 without cancellation.
double i_gt2c_exact_excess(double t, const TrafficModel& traffic, const NetworkGeometry& geom);
double i_gt2c_expansion(double t, const TrafficModel& traffic, const NetworkGeometry& geom);

double i_lt2c_numeric(double t, const TrafficModel& traffic, const NetworkGeometry& geom,
                      const QuadratureSpec& spec = {});
double i_lt2c_expansion(double t, const TrafficModel& traffic, const NetworkGeometry& geom);

// Right-band (I5) and left-band (I6) contributions to I_{<2c}, truncated at
// first order in 1/w where w ~ mu * x. Accurate when lambda * r0 >> 1.
double i5_approx(double t, const TrafficModel& traffic, const NetworkGeometry& geom);
double i6_approx(double t, const TrafficModel& traffic, const NetworkGeometry& geom);
// I5 from its single-integral incomplete-gamma representation.
double i5_incomplete_gamma(double t, const TrafficModel& traffic, const NetworkGeometry& geom,
                           const QuadratureSpec& spec = {});

CovarianceBreakdown covariance(double t, const TrafficModel& traffic, const NetworkGeometry& geom, Method method,
                               const QuadratureSpec& spec = {});

double variance(const TrafficModel& traffic, const NetworkGeometry& geom, VarianceMethod method,
                const QuadratureSpec& spec = {});

// 0.5 * 2F1(2eta-1, eta; 2eta; -tu/r0), t in [0, tmax].
double rho_ppp(double t, const NetworkGeometry& geom);

// Expansion: (1 - lambda c) rho_ppp. PcfApprox: pcf-approx covariance over the
// approximate variance. ExactQuadrature: exact covariance over exact variance.
double rho(double t, const TrafficModel& traffic, const NetworkGeometry& geom, Method method,
           const QuadratureSpec& spec = {});

// rho over a grid; the first out-of-domain point aborts with its index.
AnalyticCurve curve(const std::vector<double>& t_grid, const TrafficModel& traffic, const NetworkGeometry& geom,
                    Method method, const QuadratureSpec& spec = {});

}  // namespace vanetcorr
