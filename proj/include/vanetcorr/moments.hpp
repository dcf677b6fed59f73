#pragma once

#include <cstdint>

namespace vanetcorr {

// Single-pass first and second moments of a pair stream (Welford updates,
// Chan et al. pairwise merge). Merging is associative up to rounding.
class BivariateMoments {
public:
    void add(double x, double y) noexcept {
        ++n_;
        const double n = static_cast<double>(n_);
        const double dx = x - mean_x_;
        const double dy = y - mean_y_;
        mean_x_ += dx / n;
        mean_y_ += dy / n;
        m2x_ += dx * (x - mean_x_);
        m2y_ += dy * (y - mean_y_);
        cxy_ += dx * (y - mean_y_);
    }

    void merge(const BivariateMoments& other) noexcept {
        if (other.n_ == 0) return;
        if (n_ == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(other.n_);
        const double n = na + nb;
        const double dx = other.mean_x_ - mean_x_;
        const double dy = other.mean_y_ - mean_y_;
        const double weight = na * nb / n;
        mean_x_ += dx * nb / n;
        mean_y_ += dy * nb / n;
        m2x_ += other.m2x_ + dx * dx * weight;
        m2y_ += other.m2y_ + dy * dy * weight;
        cxy_ += other.cxy_ + dx * dy * weight;
        n_ += other.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    double mean_x() const noexcept { return mean_x_; }
    double mean_y() const noexcept { return mean_y_; }
    double variance_x() const noexcept { return n_ > 1 ? m2x_ / static_cast<double>(n_ - 1) : 0.0; }
    double variance_y() const noexcept { return n_ > 1 ? m2y_ / static_cast<double>(n_ - 1) : 0.0; }
    double covariance() const noexcept { return n_ > 1 ? cxy_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::uint64_t n_ = 0;
    double mean_x_ = 0.0;
    double mean_y_ = 0.0;
    double m2x_ = 0.0;
    double m2y_ = 0.0;
    double cxy_ = 0.0;
};

// Univariate running mean and variance.
class RunningMoments {
public:
    void add(double x) noexcept {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace vanetcorr
