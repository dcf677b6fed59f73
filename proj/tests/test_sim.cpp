#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "vanetcorr/analytic.hpp"
#include "vanetcorr/errors.hpp"
#include "vanetcorr/moments.hpp"
#include "vanetcorr/rng.hpp"
#include "vanetcorr/sim.hpp"

using namespace vanetcorr;

namespace {

const NetworkGeometry kHighway(150.0, 3.0, 10.0);
const TrafficModel kDense = TrafficModel::from_intensity(0.05, 4.0);
const TrafficModel kPoisson = TrafficModel::from_intensity(0.05, 0.0);

// lambda * int over the window of g(x + shift), from the antiderivative.
double windowed_mean(const TrafficModel& tr, const NetworkGeometry& g, const ObservationWindow& w, double shift) {
    const double eta = g.eta();
    auto tail = [&](double reach) {
        if (reach <= g.r0()) return 0.0;
        return (std::pow(g.r0(), 1.0 - eta) - std::pow(reach, 1.0 - eta)) / (eta - 1.0);
    };
    return tr.lambda() * (tail(w.hi + shift) + tail(-(w.lo + shift)));
}

// lambda * int g(x) g(x + s) dx over the right half-line and its mirror; the
// window cuts only a W^(1-2 eta) sliver.
double same_vehicle_product(const TrafficModel& tr, const NetworkGeometry& g, double s) {
    const double eta = g.eta();
    return 2.0 * tr.lambda() *
           oracle::tanh_sinh_to_infinity([&](double x) { return std::pow(x, -eta) * std::pow(x + s, -eta); }, g.r0());
}

EstimateOptions options(std::uint64_t seed, std::size_t n = 100000) {
    EstimateOptions o;
    o.n_samples = n;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(P::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          P::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(P::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          P::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    static_assert(P::block({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5);
}

TEST_CASE("counter streams are reproducible and distinct") {
    CounterRng a(7, 3), b(7, 3), other_stream(7, 4), other_seed(8, 3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != other_stream.next_u64());
        CHECK(x != other_seed.next_u64());
        seen.insert(x);
    }
    CHECK(seen.size() == 1000);
    CHECK(a.blocks_used() == 500);

    CounterRng u(1, 1);
    RunningMoments m;
    for (int i = 0; i < 200000; ++i) {
        const double v = u.uniform_open();
        CHECK_FALSE((v <= 0.0 || v >= 1.0));
        m.add(v);
    }
    CHECK(std::abs(m.mean() - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / 200000));
    CHECK(std::abs(m.variance() - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("exponential variates have the requested mean") {
    CounterRng rng(99, 0);
    RunningMoments m;
    for (int i = 0; i < 200000; ++i) m.add(rng.exponential(0.25));
    CHECK(std::abs(m.mean() - 4.0) < 3.0 * 4.0 / std::sqrt(200000.0));
}

TEST_CASE("co-moment merge matches a single pass") {
    CounterRng rng(5, 5);
    BivariateMoments all, left, right;
    std::vector<BivariateMoments> parts(7);
    for (int i = 0; i < 7000; ++i) {
        const double x = 1e6 + rng.uniform();
        const double y = x * 0.3 + rng.uniform();
        all.add(x, y);
        (i < 2500 ? left : right).add(x, y);
        parts[i % 7].add(x, y);
    }
    left.merge(right);
    BivariateMoments reversed;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) reversed.merge(*it);
    for (const auto* m : {&left, &reversed}) {
        CHECK(m->count() == all.count());
        CHECK(m->mean_x() == doctest::Approx(all.mean_x()).epsilon(1e-14));
        CHECK(m->variance_x() == doctest::Approx(all.variance_x()).epsilon(1e-9));
        CHECK(m->variance_y() == doctest::Approx(all.variance_y()).epsilon(1e-9));
        CHECK(m->covariance() == doctest::Approx(all.covariance()).epsilon(1e-9));
    }
    BivariateMoments empty;
    empty.merge(all);
    CHECK(empty.covariance() == all.covariance());
}

TEST_CASE("configurations respect the hardcore distance and the window") {
    const ObservationWindow w{-1000.0, 1500.0};
    for (std::uint64_t r = 0; r < 500; ++r) {
        CounterRng rng(11, r);
        const auto config = sample_configuration(kDense, w, rng);
        REQUIRE_FALSE(config.positions.empty());
        CHECK(config.positions.front() >= w.lo);
        CHECK(config.positions.back() <= w.hi);
        for (std::size_t i = 1; i < config.positions.size(); ++i)
            CHECK(config.positions[i] - config.positions[i - 1] >= 4.0 - 1e-12);
    }
    CounterRng rng(1, 1);
    CHECK_THROWS_AS(sample_configuration(kDense, {0.0, 100.0}, rng), DomainError);
    CHECK_THROWS_AS(sample_configuration(kDense, {10.0, 0.0}, rng), DomainError);
}

TEST_CASE("empirical intensity is unbiased and stationary") {
    const ObservationWindow w{-1000.0, 1000.0};
    RunningMoments total, left, right, difference;
    VehicleConfiguration config;
    for (std::uint64_t r = 0; r < 10000; ++r) {
        CounterRng rng(21, r);
        sample_configuration_into(kDense, w, rng, config);
        double l = 0.0;
        for (double x : config.positions) l += x < 0.0 ? 1.0 : 0.0;
        const double n = static_cast<double>(config.positions.size());
        total.add(n / w.length());
        left.add(l / 1000.0);
        right.add((n - l) / 1000.0);
        difference.add((2.0 * l - n) / 1000.0);
    }
    const double se = std::sqrt(total.variance() / 10000.0);
    CHECK(std::abs(total.mean() - 0.05) < 3.0 * se);
    CHECK(std::abs(difference.mean()) < 3.0 * std::sqrt(difference.variance() / 10000.0));
}

TEST_CASE("Poisson counts have unit dispersion") {
    const ObservationWindow w{0.0, 2000.0};
    RunningMoments counts;
    VehicleConfiguration config;
    for (std::uint64_t r = 0; r < 100000; ++r) {
        CounterRng rng(31, r);
        sample_configuration_into(kPoisson, w, rng, config);
        counts.add(static_cast<double>(config.positions.size()));
    }
    const double dispersion = counts.variance() / counts.mean();
    MESSAGE("dispersion " << dispersion);
    CHECK(dispersion > 0.97);
    CHECK(dispersion < 1.03);
}

TEST_CASE("interference of fixed configurations") {
    auto unit = [] { return 1.0; };
    const VehicleConfiguration empty{{}, {-2000.0, 2000.0}};
    CHECK(interference_at(empty, 0.0, kHighway, unit) == 0.0);
    const VehicleConfiguration single{{300.0}, {-2000.0, 2000.0}};
    CHECK(interference_at(single, 0.0, kHighway, unit) == doctest::Approx(3.7037e-8).epsilon(1e-4));
    CHECK(interference_at(single, -200.0, kHighway, unit) == 0.0);
    CHECK(interference_at(single, -600.0, kHighway, unit) == doctest::Approx(3.7037e-8).epsilon(1e-4));
    int calls = 0;
    const VehicleConfiguration mixed{{-400.0, -10.0, 20.0, 500.0}, {-2000.0, 2000.0}};
    interference_at(mixed, 0.0, kHighway, [&] { ++calls; return 1.0; });
    CHECK(calls == 2);
}

TEST_CASE("same positions at zero lag, fresh fading") {
    const auto window = pair_window(kDense, kHighway, 0.0);
    CounterRng rng(3, 0);
    const auto pair = sample_pair(kDense, kHighway, 0.0, window, rng);
    CHECK(pair.i_tau > 0.0);
    CHECK(pair.i_tau_t > 0.0);
    CHECK(pair.i_tau != pair.i_tau_t);

    CounterRng replay(3, 0);
    const auto config = sample_configuration(kDense, window, replay);
    CHECK(interference_at(config, 0.0, kHighway, replay) == pair.i_tau);
    CHECK(interference_at(config, 0.0, kHighway, replay) == pair.i_tau_t);
}

TEST_CASE("sample mean matches the Campbell mean over the window") {
    const double t = 5.0;
    const auto window = pair_window(kDense, kHighway, t);
    RunningMoments m;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        CounterRng rng(41, i);
        m.add(sample_pair(kDense, kHighway, t, window, rng).i_tau);
    }
    const double se = std::sqrt(m.variance() / 100000.0);
    const double expected = windowed_mean(kDense, kHighway, window, 0.0);
    CHECK(std::abs(m.mean() - expected) < 3.0 * se);
    const double bias = truncation_bias_bound(kDense, kHighway, t);
    CHECK(mean_interference(kDense, kHighway) - expected <= bias);
    CHECK(std::abs(m.mean() - mean_interference(kDense, kHighway)) < bias + 3.0 * se);
}

TEST_CASE("Poisson product moment matches the pair-term integral") {
    const double t = 3.0;
    const double shift = t * kHighway.u();
    const auto window = pair_window(kPoisson, kHighway, t);
    RunningMoments product;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        CounterRng rng(51, i);
        const auto p = sample_pair(kPoisson, kHighway, t, window, rng);
        CHECK(p.i_tau >= 0.0);
        product.add(p.i_tau * p.i_tau_t);
    }
    const double expected = same_vehicle_product(kPoisson, kHighway, shift) +
                            windowed_mean(kPoisson, kHighway, window, 0.0) *
                                windowed_mean(kPoisson, kHighway, window, shift);
    CHECK(std::abs(product.mean() - expected) < 3.0 * std::sqrt(product.variance() / 100000.0));
}

TEST_CASE("Poisson correlation, variance and fading halving") {
    const auto at_zero = estimate(kPoisson, kHighway, 0.0, options(61));
    CHECK(at_zero.rho >= 0.45);
    CHECK(at_zero.rho <= 0.55);

    const auto e = estimate(kPoisson, kHighway, 5.0, options(62));
    MESSAGE("rho(5) = " << e.rho << " +- " << e.se_rho << ", Poisson " << rho_ppp(5.0, kHighway));
    CHECK(std::abs(e.rho - rho_ppp(5.0, kHighway)) < 0.02);
    const double var_ppp = 4.0 * 0.05 * std::pow(150.0, -5.0) / 5.0;
    CHECK(std::abs(e.variance - var_ppp) < 3.0 * e.se_variance);
    CHECK(e.n == 100000);
    CHECK(e.rho == doctest::Approx(e.covariance / e.variance).epsilon(1e-15));
    CHECK(std::abs(e.rho) <= 1.0 + 1e-9);
    CHECK(e.truncation_bias_bound > 0.0);
}

TEST_CASE("shifted-exponential correlation follows the pcf-approx curve") {
    for (double t : {1.0, 5.0, 10.0, 15.0}) {
        const auto e = estimate(kDense, kHighway, t, options(70 + static_cast<std::uint64_t>(t)));
        const double analytic = rho(t, kDense, kHighway, Method::PcfApprox);
        MESSAGE("t = " << t << ": " << e.rho << " +- " << e.se_rho << " vs " << analytic);
        CHECK(std::abs(e.rho - analytic) < 0.02);
    }
}

TEST_CASE("exact-quadrature moments agree with simulation") {
    const auto e = estimate(kDense, kHighway, 5.0, options(81));
    const double exact_var = variance(kDense, kHighway, VarianceMethod::ExactQuadrature);
    const double exact_cov = covariance(5.0, kDense, kHighway, Method::ExactQuadrature).covariance;
    CHECK(std::abs(e.variance - exact_var) < 3.0 * e.se_variance);
    CHECK(std::abs(e.covariance - exact_cov) < 3.0 * e.se_covariance);
    CHECK(std::abs(e.rho - rho(5.0, kDense, kHighway, Method::ExactQuadrature)) < 3.0 * e.se_rho);
}

TEST_CASE("estimates do not depend on partitioning") {
    auto o = options(91, 20000);
    o.n_partitions = 1;
    const auto one = estimate(kDense, kHighway, 7.0, o);
    o.n_partitions = 8;
    o.max_threads = 4;
    const auto eight = estimate(kDense, kHighway, 7.0, o);
    CHECK(eight.rho == doctest::Approx(one.rho).epsilon(1e-12));
    CHECK(eight.variance == doctest::Approx(one.variance).epsilon(1e-12));
    CHECK(eight.covariance == doctest::Approx(one.covariance).epsilon(1e-12));
    CHECK(eight.se_rho == doctest::Approx(one.se_rho).epsilon(1e-12));
    const auto again = estimate(kDense, kHighway, 7.0, o);
    CHECK(again.rho == eight.rho);
    CHECK(again.se_rho == eight.se_rho);
}

TEST_CASE("covariance is symmetric under reversing the direction of travel") {
    const double t = 4.0;
    const auto forward = estimate(kDense, kHighway, t, options(101));
    const auto w = pair_window(kDense, kHighway, t);
    const ObservationWindow mirrored{-w.hi, -w.lo};
    BivariateMoments backward;
    VehicleConfiguration config;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        CounterRng rng(102, i);
        sample_configuration_into(kDense, mirrored, rng, config);
        const double now = interference_at(config, 0.0, kHighway, rng);
        const double later = interference_at(config, -t * kHighway.u(), kHighway, rng);
        backward.add(now, later);
    }
    CHECK(std::abs(backward.covariance() - forward.covariance) < 3.0 * std::sqrt(2.0) * forward.se_covariance);
}

TEST_CASE("estimate preconditions") {
    CHECK_THROWS_AS(estimate(kDense, kHighway, 1.0, options(1, 999)), DomainError);
    auto o = options(1, 5000);
    o.n_blocks = 1;
    CHECK_THROWS_AS(estimate(kDense, kHighway, 1.0, o), DomainError);
    CHECK_THROWS_AS(estimate(kDense, kHighway, -1.0, options(1, 5000)), DomainError);
}

TEST_CASE("pair-distance histogram near the hardcore edge and far away") {
    const ObservationWindow w{0.0, 2000.0};
    const HistogramBins bins{256, 0.25};
    const auto h = pair_distance_histogram(kDense, w, 2000, bins, 111);
    const double lambda_mu = 0.05 * 0.0625;
    for (std::size_t b = 0; b < 16; ++b) CHECK(h.counts[b] == 0);
    const double expected = pcf_bin_average(kDense, w.length(), h.lower_edge(16), h.upper_edge(16));
    CHECK(std::abs(h.density[16] - expected) < 3.0 * h.std_error[16]);
    CHECK(std::abs(expected / lambda_mu - 1.0) < 0.01);

    RunningMoments far;
    for (std::size_t b = 160; b < 256; ++b) far.add(h.density[b] / (0.05 * 0.05));
    CHECK(std::abs(far.mean() - 1.0) < 0.02);
    CHECK_THROWS_AS(pair_distance_histogram(kDense, w, 1, bins, 1), DomainError);
}
