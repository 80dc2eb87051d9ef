#include "balaw/wallis.hpp"

#include <numbers>
#include <stdexcept>

namespace balaw {

double wallis_integral(int n) {
  if (n < 0) throw std::invalid_argument("wallis_integral: n must be >= 0");
  double even = std::numbers::pi / 2.0;  // W_0
  double odd = 1.0;                      // W_1
  for (int k = 2; k <= n; ++k) {
    double& w = (k % 2 == 0) ? even : odd;
    w *= static_cast<double>(k - 1) / static_cast<double>(k);
  }
  if (n == 0) return std::numbers::pi / 2.0;
  return (n % 2 == 0) ? even : odd;
}

double unit_ball_volume(int n) {
  if (n < 0) throw std::invalid_argument("unit_ball_volume: n must be >= 0");
  double omega = 1.0;  // omega_0
  double even = std::numbers::pi / 2.0;
  double odd = 1.0;
  for (int k = 1; k <= n; ++k) {
    if (k >= 2) {
      double& w = (k % 2 == 0) ? even : odd;
      w *= static_cast<double>(k - 1) / static_cast<double>(k);
    }
    const double wk = (k % 2 == 0) ? even : odd;
    omega *= 2.0 * wk;
  }
  return omega;
}

}  // namespace balaw
