#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vanetcorr {

// Input lies outside the regime where a formula or model is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative numeric routine failed to reach its tolerance. Carries the
// best estimate available at the point of failure.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

// Monte Carlo estimator cannot form a statistic (e.g. zero variance).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or invalid run configuration. line == 0 means "not tied to a line".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::string field, const std::string& message)
        : std::runtime_error(format(line, field, message)), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(std::size_t line, const std::string& field, const std::string& message) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += "'" + field + "': ";
        return out + message;
    }

    std::size_t line_;
    std::string field_;
};

}  // namespace vanetcorr
