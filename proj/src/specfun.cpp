#include "vanetcorr/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vanetcorr/errors.hpp"

namespace vanetcorr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSeriesTerms = 100000;

// Plain Gauss series; caller guarantees 0 <= z < 1.
double hyp2f1_series(double a, double b, double c, double z) {
    double sum = 1.0;
    double term = 1.0;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) return sum;
        if (std::abs(term) < 1e-16 * std::abs(sum) && std::abs(ratio) < 1.0) return sum;
    }
    throw ConvergenceError("hyp2f1: series did not converge", sum, std::abs(term));
}

// Modified Lentz evaluation of x^-a e^x Gamma(a, x) for x >= 1.5.
double upper_gamma_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    throw ConvergenceError("upper_gamma: continued fraction did not converge", h, INFINITY);
}

// Sum_{n>=0} x^n / (a (a+1) ... (a+n)) for a > 0, so that the lower
// incomplete gamma is e^-x x^a times this sum.
double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxSeriesTerms; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) return sum;
    }
    throw ConvergenceError("upper_gamma: series did not converge", sum, std::abs(term));
}

// (Gamma(1+a) - 1) / a, continuous through a = 0.
double gamma_one_plus_difference(double a) {
    constexpr double kSecond = 0.5 * std::numbers::egamma * std::numbers::egamma + std::numbers::pi * std::numbers::pi / 12.0;
    if (std::abs(a) < 1e-8) return -std::numbers::egamma + kSecond * a;
    // Divide by the increment that 1 + a actually represents.
    const double b = 1.0 + a;
    return std::expm1(std::lgamma(b)) / (b - 1.0);
}

// Gamma(a, x) for |a| <= 1/2 and small x. Writing Gamma(a) - x^a / a as
// (Gamma(1+a) - 1)/a - (x^a - 1)/a keeps the result accurate near a = 0,
// where both pieces diverge separately.
double upper_gamma_small_order(double a, double x) {
    const double log_x = std::log(x);
    const double al = a * log_x;
    const double power_difference = std::abs(al) < 1e-8 ? log_x * (1.0 + 0.5 * al) : std::expm1(al) / a;
    const double head = gamma_one_plus_difference(a) - power_difference;
    double power = 1.0;
    double tail = 0.0;
    for (int n = 1; n < 200; ++n) {
        power *= -x / n;
        const double term = power / (a + n);
        tail += term;
        if (std::abs(term) < kEps * std::abs(tail)) break;
    }
    return head - std::exp(al) * tail;
}

double scaled_upper_gamma_positive_x(double a, double x) {
    if (x >= std::max(1.5, a + 1.0)) return std::exp(a * std::log(x)) * upper_gamma_cf(a, x);
    if (a > 0.5) return std::exp(x) * std::tgamma(a) - std::exp(a * std::log(x)) * lower_gamma_series(a, x);

    // Small x, a <= 1/2: start from a base order in [-1/2, 1/2] and recur down
    // with S(p-1) = (S(p) - x^(p-1)) / (p-1), S(p) = e^x Gamma(p, x). Every
    // divisor p - 1 is at most -1/2.
    const double steps = std::max(0.0, std::round(-a));
    const double base = a + steps;
    double scaled = std::exp(x) * upper_gamma_small_order(base, x);
    for (double k = 0.0; k < steps; k += 1.0) {
        const double p = base - k;
        scaled = (scaled - std::exp((p - 1.0) * std::log(x))) / (p - 1.0);
    }
    return scaled;
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        throw DomainError("hyp2f1: non-finite argument");
    if (!(c > b && b > 0.0)) throw DomainError("hyp2f1: requires c > b > 0");
    if (!(z < 1.0)) throw DomainError("hyp2f1: requires z < 1");
    if (z == 0.0) return 1.0;
    if (z > 0.0) return hyp2f1_series(a, b, c, z);
    // Pfaff: 2F1(a,b;c;z) = (1-z)^-b 2F1(c-a, b; c; z/(z-1)).
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -b) * hyp2f1_series(c - a, b, c, w);
}

double upper_gamma_scaled(double a, double x) {
    if (!std::isfinite(a) || std::isnan(x)) throw DomainError("upper_gamma: non-finite argument");
    if (x < 0.0) throw DomainError("upper_gamma: requires x >= 0");
    if (x == 0.0) {
        if (a > 0.0) return std::tgamma(a);
        throw DomainError("upper_gamma: divergent for x = 0 and a <= 0");
    }
    if (std::isinf(x)) return 0.0;
    return scaled_upper_gamma_positive_x(a, x);
}

double upper_gamma(double a, double x) {
    const double scaled = upper_gamma_scaled(a, x);
    if (x == 0.0) return scaled;
    return scaled * std::exp(-x);
}

}  // namespace vanetcorr
