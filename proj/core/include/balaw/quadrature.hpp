#pragma once

#include <functional>

namespace balaw {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b] by interval
/// bisection. Stops when the local Kronrod error estimate satisfies the
/// tolerance |err| <= abs_tol + rel_tol*|value| pro-rated per subinterval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol = 1e-12,
                                    double abs_tol = 1e-14,
                                    int max_depth = 40);

/// Same, but throws std::runtime_error when the tolerance is not reached.
double integrate_or_throw(const std::function<double(double)>& f,
                          double a, double b,
                          double rel_tol = 1e-12,
                          double abs_tol = 1e-14,
                          int max_depth = 40);

}  // namespace balaw
