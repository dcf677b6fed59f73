#pragma once

#include "vanetcorr/quadrature.hpp"

namespace vanetcorr {

// Gauss hypergeometric function 2F1(a, b; c; z) for real arguments with
// c > b > 0 and z < 1. Negative z is mapped into [0, 1) with the Pfaff
// transformation before summing the series. Throws DomainError outside that
// family and ConvergenceError if the series fails to settle.
double hyp2f1(double a, double b, double c, double z);

// Upper incomplete gamma function Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for
// real a (negative values included) and x > 0. x == 0 is accepted for a > 0.
double upper_gamma(double a, double x);

// e^x * Gamma(a, x); finite for large x where Gamma(a, x) underflows.
double upper_gamma_scaled(double a, double x);

}  // namespace vanetcorr
