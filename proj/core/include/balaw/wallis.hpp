#pragma once

namespace balaw {

/// W_n = integral of cos(theta)^n over [0, pi/2], by the closed two-term
/// recurrence W_n = (n-1)/n * W_{n-2} with W_0 = pi/2, W_1 = 1.
double wallis_integral(int n);

/// Volume of the unit ball in R^n, by the recurrence
/// omega_n = 2 * W_n * omega_{n-1} with omega_0 = 1.
double unit_ball_volume(int n);

}  // namespace balaw
