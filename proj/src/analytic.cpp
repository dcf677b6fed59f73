#include "vanetcorr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vanetcorr/errors.hpp"
#include "vanetcorr/specfun.hpp"

namespace vanetcorr {

namespace {

std::string describe(double t) { return "t = " + std::to_string(t); }

void require_range(double t, const NetworkGeometry& geom, const char* what) {
    if (!(t >= 0.0 && t <= geom.tmax()))
        throw DomainError(std::string(what) + ": " + describe(t) + " outside [0, tmax]");
}

void require_pair_regime(double t, const TrafficModel& traffic, const NetworkGeometry& geom, const char* what) {
    const TimeLagWindow window(traffic, geom);
    if (!window.in_pair_regime(t))
        throw DomainError(std::string(what) + ": " + describe(t) + " outside [t1, t2] = [" +
                          std::to_string(window.t1()) + ", " + std::to_string(window.t2()) + "]");
}

// int_{r0}^inf x^-eta (x + s)^-eta dx / r0^(1-2eta), for s >= 0.
double one_sided_shape(double s, const NetworkGeometry& geom) {
    const double eta = geom.eta();
    return hyp2f1(2.0 * eta - 1.0, eta, 2.0 * eta, -s / geom.r0()) / (2.0 * eta - 1.0);
}

double r0_power(const NetworkGeometry& geom, double exponent) { return std::pow(geom.r0(), exponent); }

// pathloss_autocorrelation in units of r0^(1-2eta).
double scaled_autocorrelation(double s, const NetworkGeometry& geom, const QuadratureSpec& spec) {
    const double eta = geom.eta();
    const double sigma = std::abs(s) / geom.r0();
    double value = 2.0 * one_sided_shape(std::abs(s), geom);
    if (sigma > 2.0) {
        // Pairs straddling the cell: x < -r0 and x + s > r0.
        auto straddle = [&](double xi) { return std::pow(xi, -eta) * std::pow(sigma - xi, -eta); };
        value += 2.0 * integrate_finite(straddle, 1.0, 0.5 * sigma, spec).value;
    }
    return value;
}

struct PairIntegrals {
    // All in units of lambda^2 r0^(1-2eta).
    double pcf_inner = 0.0;   // int_{|d|<2c} pcf(|d|) A(tu + d) dd / lambda^2
    double flat_inner = 0.0;  // int_{|d|<2c} A(tu + d) dd
    double excess_outer = 0.0;  // int_{|d|>2c} (pcf(|d|) - lambda^2) A(tu + d) dd / lambda^2
};

// Pair-term integrals over separation d with the exact PCF. Beyond the
// settle distance the PCF equals lambda^2 and contributes nothing to the
// excess.
PairIntegrals exact_pair_integrals(double shift, const TrafficModel& traffic, const NetworkGeometry& geom,
                                   const QuadratureSpec& spec) {
    PairIntegrals out;
    if (traffic.is_poisson()) return out;
    const double c = traffic.c();
    const double lambda_sq = traffic.lambda() * traffic.lambda();
    const double reach = std::max(pcf_settle_distance(traffic), 2.0 * c);
    const double r0 = geom.r0();

    auto kinks_in = [&](double lo, double hi) {
        std::vector<double> points{lo, hi};
        for (double k = std::ceil(lo / c); k * c < hi; k += 1.0) points.push_back(k * c);
        for (double p : {-shift, -2.0 * r0 - shift, 2.0 * r0 - shift})
            if (p > lo && p < hi) points.push_back(p);
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        return points;
    };
    auto autocorr = [&](double d) { return scaled_autocorrelation(shift + d, geom, spec); };
    auto pcf_ratio = [&](double d) { return pcf(std::abs(d), traffic) / lambda_sq; };

    const auto inner = kinks_in(-2.0 * c, 2.0 * c);
    out.pcf_inner = integrate_pieces([&](double d) { return pcf_ratio(d) * autocorr(d); }, inner, spec).value;
    out.flat_inner = integrate_pieces(autocorr, inner, spec).value;
    if (reach > 2.0 * c) {
        auto excess = [&](double d) { return (pcf_ratio(d) - 1.0) * autocorr(d); };
        out.excess_outer = integrate_pieces(excess, kinks_in(-reach, -2.0 * c), spec).value +
                           integrate_pieces(excess, kinks_in(2.0 * c, reach), spec).value;
    }
    return out;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::ExactQuadrature: return "exact-quadrature";
        case Method::PcfApprox: return "pcf-approx";
        case Method::Expansion: return "expansion";
        case Method::Ppp: return "ppp";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::ExactQuadrature, Method::PcfApprox, Method::Expansion, Method::Ppp})
        if (to_string(m) == name) return m;
    throw DomainError("unknown analytic method '" + std::string(name) + "'");
}

std::pair<double, double> method_domain(Method method, const TrafficModel& traffic, const NetworkGeometry& geom) {
    switch (method) {
        case Method::PcfApprox:
        case Method::Expansion:
            return {2.0 * traffic.c() / geom.u(), (2.0 * geom.r0() - 2.0 * traffic.c()) / geom.u()};
        case Method::ExactQuadrature:
        case Method::Ppp:
            break;
    }
    return {0.0, geom.tmax()};
}

double pathloss_autocorrelation(double s, const NetworkGeometry& geom, const QuadratureSpec& spec) {
    return r0_power(geom, 1.0 - 2.0 * geom.eta()) * scaled_autocorrelation(s, geom, spec);
}

double j_term(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    require_range(t, geom, "j_term");
    return 2.0 * traffic.lambda() * r0_power(geom, 1.0 - 2.0 * geom.eta()) * one_sided_shape(t * geom.u(), geom);
}

double i_gt2c_exact_excess(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    require_pair_regime(t, traffic, geom, "i_gt2c_exact");
    const double eta = geom.eta();
    const double r0 = geom.r0();
    const double lambda_sq = traffic.lambda() * traffic.lambda();
    const double tu = t * geom.u();
    const double c2 = 2.0 * traffic.c();
    const double near = (c2 - tu) / r0;   // <= 0 in the pair regime
    const double far = -(c2 + tu) / r0;
    const double scale = r0_power(geom, 2.0 - 2.0 * eta) * lambda_sq;

    const double first = scale / ((eta - 1.0) * (eta - 1.0)) *
                         (hyp2f1(2.0 * eta - 2.0, eta, 2.0 * eta - 1.0, far) -
                          hyp2f1(2.0 * eta - 2.0, eta, 2.0 * eta - 1.0, near));
    // Both factors of the second group carry c-parameter 2eta, which is what
    // the defining double integral reduces to.
    const double second = 2.0 * scale / ((2.0 * eta - 1.0) * (eta - 1.0)) *
                          (near * hyp2f1(2.0 * eta - 1.0, eta, 2.0 * eta, near) -
                           far * hyp2f1(2.0 * eta - 1.0, eta, 2.0 * eta, far));
    return first + second;
}

double i_gt2c_exact(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    const double mean = mean_interference(traffic, geom);
    return mean * mean + i_gt2c_exact_excess(t, traffic, geom);
}

double i_gt2c_expansion(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    require_pair_regime(t, traffic, geom, "i_gt2c_expansion");
    const double mean = mean_interference(traffic, geom);
    const double lambda = traffic.lambda();
    return mean * mean - 8.0 * lambda * lambda * traffic.c() * r0_power(geom, 1.0 - 2.0 * geom.eta()) *
                             one_sided_shape(t * geom.u(), geom);
}

double i_lt2c_numeric(double t, const TrafficModel& traffic, const NetworkGeometry& geom,
                      const QuadratureSpec& spec) {
    require_pair_regime(t, traffic, geom, "i_lt2c_numeric");
    if (traffic.is_poisson()) return 0.0;
    const double c = traffic.c();
    const double mu = traffic.mu();
    const double r0 = geom.r0();
    const double eta = geom.eta();
    const double tu = t * geom.u();
    auto g = [&](double r) {
        const double a = std::abs(r);
        return a <= r0 ? 0.0 : std::pow(a / r0, -eta);
    };
    // With v the free part of the separation, both bands share the weight
    // e^{-mu v} on [0, c]: right band y = x + c + v, left band y = x - c - v.
    auto outer = [&](double x) {
        auto bands = [&](double v) { return std::exp(-mu * v) * (g(x + tu + c + v) + g(x + tu - c - v)); };
        return g(x) * integrate_finite(bands, 0.0, c, spec).value / c;
    };
    const PowerTail tail{2.0 * std::pow(r0, 2.0 * eta), 2.0 * eta, r0};
    const double scaled = integrate_semi_infinite(outer, r0, tail, spec).value;
    return 2.0 * traffic.lambda() * mu * c * r0_power(geom, -2.0 * eta) * scaled;
}

double i_lt2c_expansion(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    require_pair_regime(t, traffic, geom, "i_lt2c_expansion");
    const double lambda = traffic.lambda();
    const double c = traffic.c();
    return 2.0 * lambda * lambda * c * (2.0 + lambda * c) * r0_power(geom, 1.0 - 2.0 * geom.eta()) *
           one_sided_shape(t * geom.u(), geom);
}

namespace {

// Shared shape of the first-order band approximations. `offset` is the
// hypergeometric argument, `second_coeff` multiplies the 1/w correction.
double band_approx(const TrafficModel& traffic, const NetworkGeometry& geom, double offset, double second_coeff) {
    const double eta = geom.eta();
    const double r0 = geom.r0();
    const double leading = -std::expm1(-traffic.c() * traffic.mu());
    return traffic.lambda() * r0_power(geom, -2.0 * eta) *
           (leading * r0 / (2.0 * eta - 1.0) * hyp2f1(eta, 2.0 * eta - 1.0, 2.0 * eta, offset) +
            second_coeff * hyp2f1(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, offset));
}

}  // namespace

double i5_approx(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    require_pair_regime(t, traffic, geom, "i5_approx");
    if (traffic.is_poisson()) return 0.0;
    const double cm = traffic.c() * traffic.mu();
    const double em = std::exp(-cm);
    const double coeff = (cm * em + std::expm1(-cm)) / (2.0 * traffic.mu());
    return band_approx(traffic, geom, -(traffic.c() + t * geom.u()) / geom.r0(), coeff);
}

double i6_approx(double t, const TrafficModel& traffic, const NetworkGeometry& geom) {
    require_pair_regime(t, traffic, geom, "i6_approx");
    if (traffic.is_poisson()) return 0.0;
    const double cm = traffic.c() * traffic.mu();
    const double em = std::exp(-cm);
    const double coeff = -(cm * em + std::expm1(-cm)) / (2.0 * traffic.mu());
    return band_approx(traffic, geom, (traffic.c() - t * geom.u()) / geom.r0(), coeff);
}

double i5_incomplete_gamma(double t, const TrafficModel& traffic, const NetworkGeometry& geom,
                           const QuadratureSpec& spec) {
    require_pair_regime(t, traffic, geom, "i5_incomplete_gamma");
    if (traffic.is_poisson()) return 0.0;
    const double eta = geom.eta();
    const double r0 = geom.r0();
    const double mu = traffic.mu();
    const double c = traffic.c();
    const double tu = t * geom.u();
    const double a = 1.0 - eta;
    const double damp = std::exp(-mu * c);
    const double mu_r0_eta = std::pow(mu * r0, eta);
    // e^w [Gamma(a, w) - Gamma(a, w + mu c)] with w = mu (x + tu + c).
    auto integrand = [&](double x) {
        const double w = mu * (x + tu + c);
        const double bracket = upper_gamma_scaled(a, w) - damp * upper_gamma_scaled(a, w + mu * c);
        return std::pow(x / r0, -eta) * mu_r0_eta * bracket;
    };
    const PowerTail tail{std::pow(r0, 2.0 * eta), 2.0 * eta, r0};
    const double scaled = integrate_semi_infinite(integrand, r0, tail, spec).value;
    return traffic.lambda() * r0_power(geom, -2.0 * eta) * scaled;
}

CovarianceBreakdown covariance(double t, const TrafficModel& traffic, const NetworkGeometry& geom, Method method,
                               const QuadratureSpec& spec) {
    CovarianceBreakdown out;
    out.method = method;
    const double mean = mean_interference(traffic, geom);
    out.mean_sq = mean * mean;
    const double lambda = traffic.lambda();

    switch (method) {
        case Method::Expansion: {
            out.j_term = j_term(t, traffic, geom);
            out.i_gt2c = i_gt2c_expansion(t, traffic, geom);
            out.i_lt2c = i_lt2c_expansion(t, traffic, geom);
            const double reduction = 1.0 - traffic.lambda_c();
            out.covariance = out.j_term * reduction * reduction;
            return out;
        }
        case Method::PcfApprox: {
            out.j_term = j_term(t, traffic, geom);
            const double excess = i_gt2c_exact_excess(t, traffic, geom);
            out.i_gt2c = out.mean_sq + excess;
            out.i_lt2c = i_lt2c_numeric(t, traffic, geom, spec);
            out.covariance = out.j_term + excess + out.i_lt2c;
            return out;
        }
        case Method::ExactQuadrature: {
            require_range(t, geom, "covariance");
            const double shift = t * geom.u();
            const double unit = lambda * lambda * r0_power(geom, 1.0 - 2.0 * geom.eta());
            out.j_term = lambda * pathloss_autocorrelation(shift, geom, spec);
            const PairIntegrals pairs = exact_pair_integrals(shift, traffic, geom, spec);
            const double excess = unit * (pairs.excess_outer - pairs.flat_inner);
            out.i_gt2c = out.mean_sq + excess;
            out.i_lt2c = unit * pairs.pcf_inner;
            out.covariance = out.j_term + excess + out.i_lt2c;
            return out;
        }
        case Method::Ppp:
            break;
    }
    throw DomainError("covariance: method must be exact-quadrature, pcf-approx or expansion");
}

double variance(const TrafficModel& traffic, const NetworkGeometry& geom, VarianceMethod method,
                const QuadratureSpec& spec) {
    const double eta = geom.eta();
    const double ppp = 4.0 * traffic.lambda() * r0_power(geom, 1.0 - 2.0 * eta) / (2.0 * eta - 1.0);
    switch (method) {
        case VarianceMethod::Ppp: return ppp;
        case VarianceMethod::Approx: return ppp * (1.0 - traffic.lambda_c());
        case VarianceMethod::ExactQuadrature: {
            // Unit-mean exponential fading has E{h^2} = 2.
            const double lambda = traffic.lambda();
            const double unit = lambda * lambda * r0_power(geom, 1.0 - 2.0 * eta);
            const PairIntegrals pairs = exact_pair_integrals(0.0, traffic, geom, spec);
            return 2.0 * lambda * pathloss_autocorrelation(0.0, geom, spec) +
                   unit * (pairs.pcf_inner - pairs.flat_inner + pairs.excess_outer);
        }
    }
    throw DomainError("variance: unknown method");
}

double rho_ppp(double t, const NetworkGeometry& geom) {
    require_range(t, geom, "rho_ppp");
    const double eta = geom.eta();
    return 0.5 * hyp2f1(2.0 * eta - 1.0, eta, 2.0 * eta, -t * geom.u() / geom.r0());
}

double rho(double t, const TrafficModel& traffic, const NetworkGeometry& geom, Method method,
           const QuadratureSpec& spec) {
    switch (method) {
        case Method::Ppp: return rho_ppp(t, geom);
        case Method::Expansion:
            require_pair_regime(t, traffic, geom, "rho");
            return (1.0 - traffic.lambda_c()) * rho_ppp(t, geom);
        case Method::PcfApprox:
            return covariance(t, traffic, geom, method, spec).covariance /
                   variance(traffic, geom, VarianceMethod::Approx);
        case Method::ExactQuadrature:
            return covariance(t, traffic, geom, method, spec).covariance /
                   variance(traffic, geom, VarianceMethod::ExactQuadrature, spec);
    }
    throw DomainError("rho: unknown method");
}

AnalyticCurve curve(const std::vector<double>& t_grid, const TrafficModel& traffic, const NetworkGeometry& geom,
                    Method method, const QuadratureSpec& spec) {
    AnalyticCurve out{t_grid, {}, method, traffic, geom};
    out.values.reserve(t_grid.size());
    const auto [lo, hi] = method_domain(method, traffic, geom);
    // The exact variance does not depend on t; evaluate it once.
    double exact_variance = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (!(t >= lo && t <= hi))
            throw DomainError("curve: point " + std::to_string(i) + " (" + describe(t) + ") outside [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "] for " +
                              std::string(to_string(method)));
        if (method == Method::ExactQuadrature) {
            if (std::isnan(exact_variance))
                exact_variance = variance(traffic, geom, VarianceMethod::ExactQuadrature, spec);
            out.values.push_back(covariance(t, traffic, geom, method, spec).covariance / exact_variance);
        } else {
            out.values.push_back(rho(t, traffic, geom, method, spec));
        }
    }
    return out;
}

}  // namespace vanetcorr
