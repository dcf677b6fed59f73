#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature over finite intervals,
// and power-law-tail truncation for semi-infinite ranges.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "vanetcorr/errors.hpp"

namespace vanetcorr {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 60;
    // Relative bound on the discarded tail of a semi-infinite integral.
    double tail_tol = 1e-12;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tail_tol > 0.0))
            throw DomainError("quadrature: tolerances must be > 0");
        if (max_depth < 10) throw DomainError("quadrature: max_depth must be >= 10");
    }
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    // Analytic bound on the truncated tail (semi-infinite integrals only).
    double tail_bound = 0.0;
};

// |f(x)| <= coefficient * x^(-exponent) for all x >= onset > 0.
struct PowerTail {
    double coefficient = 1.0;
    double exponent = 2.0;
    double onset = 1.0;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478950, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534419107487, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    int depth;

    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod(F& f, double lo, double hi, int depth) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kKronrodWeights[10] * fc;
    double gauss = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod))
        throw ConvergenceError("quadrature: non-finite integrand on [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]",
                               kronrod, INFINITY);
    return {lo, hi, kronrod, std::abs(kronrod - gauss), depth};
}

inline constexpr long kMaxSegments = 200000;

}  // namespace detail

// Integrates f over consecutive breakpoints (ascending). The global error
// budget is shared across all pieces.
template <class F>
QuadResult integrate_pieces(F&& f, std::span<const double> breakpoints, const QuadratureSpec& spec = {}) {
    spec.validate();
    QuadResult result;
    if (breakpoints.size() < 2) return result;
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] >= breakpoints[i - 1])) throw DomainError("quadrature: breakpoints must ascend");

    std::priority_queue<detail::Segment> heap;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i - 1]) continue;
        auto seg = detail::gauss_kronrod(f, breakpoints[i - 1], breakpoints[i], 0);
        result.evaluations += 21;
        total += seg.value;
        error += seg.error;
        heap.push(seg);
    }

    long segments = static_cast<long>(heap.size());
    while (!heap.empty() && error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        const detail::Segment worst = heap.top();
        if (worst.depth >= spec.max_depth || segments >= detail::kMaxSegments)
            throw ConvergenceError("quadrature: max_depth exceeded", total, error);
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = detail::gauss_kronrod(f, worst.lo, mid, worst.depth + 1);
        auto right = detail::gauss_kronrod(f, mid, worst.hi, worst.depth + 1);
        result.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
    }

    // Re-sum from the leaves; the running total accumulates cancellation noise.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    result.value = total;
    result.abs_error = error;
    return result;
}

template <class F>
QuadResult integrate_finite(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    if (!(lo <= hi)) throw DomainError("quadrature: requires lo <= hi");
    const std::array<double, 2> ends = {lo, hi};
    return integrate_pieces(f, ends, spec);
}

// Integrates f over [lo, inf) given a power-law bound on its tail. The range
// is extended geometrically until the analytic tail bound
// coefficient * X^(1-exponent) / (exponent-1) drops below tail_tol times the
// accumulated integral. Interior breakpoints (> lo) are honored.
template <class F>
QuadResult integrate_semi_infinite(F&& f, double lo, const PowerTail& tail, const QuadratureSpec& spec = {},
                                   std::span<const double> breakpoints = {}) {
    spec.validate();
    if (!(tail.exponent > 1.0)) throw DomainError("quadrature: tail exponent must be > 1");
    if (!(tail.onset > 0.0) || !(tail.coefficient >= 0.0)) throw DomainError("quadrature: invalid tail bound");

    std::vector<double> points{lo};
    for (double p : breakpoints)
        if (p > lo) points.push_back(p);
    std::sort(points.begin(), points.end());
    double x = std::max(tail.onset, points.back());
    if (x <= 0.0) throw DomainError("quadrature: semi-infinite range needs a positive truncation point");
    x *= 2.0;
    points.push_back(x);

    QuadResult result = integrate_pieces(f, points, spec);
    auto bound_at = [&](double at) {
        return tail.coefficient * std::pow(at, 1.0 - tail.exponent) / (tail.exponent - 1.0);
    };
    for (int guard = 0; guard < 400; ++guard) {
        const double bound = bound_at(x);
        if (bound <= spec.tail_tol * std::max(std::abs(result.value), spec.abs_tol)) {
            result.tail_bound = bound;
            return result;
        }
        const QuadResult piece = integrate_finite(f, x, 2.0 * x, spec);
        result.value += piece.value;
        result.abs_error += piece.abs_error;
        result.evaluations += piece.evaluations;
        x *= 2.0;
    }
    throw ConvergenceError("quadrature: tail bound did not reach tail_tol", result.value, bound_at(x));
}

}  // namespace vanetcorr
