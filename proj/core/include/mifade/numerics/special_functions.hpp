#pragma once

namespace mifade::numerics {

double erf(double x);
double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x). Finite for all x
/// below ~26.6 in magnitude on the negative side and for every positive x,
/// where it decays like 1 / (x sqrt(pi)).
double erfcx(double x);

/// Gaussian tail probability Q(s) = erfc(s / sqrt 2) / 2.
double q_function(double s);

/// Q(s) from Craig's finite-range form (1/pi) int_0^{pi/2} exp(-s^2 / (2 sin^2 t)) dt,
/// evaluated by adaptive quadrature. Used to cross-check q_function.
double craig_q(double s);

/// ln(1 + e^x) without overflow or cancellation.
double softplus(double x);

}  // namespace mifade::numerics
