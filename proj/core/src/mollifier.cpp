#include "balaw/mollifier.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "balaw/kahan.hpp"
#include "balaw/quadrature.hpp"
#include "balaw/wallis.hpp"

namespace balaw {
namespace {

// exp(-1/s) extended by 0 for s <= 0; the standard C-infinity bump factor.
double bump_factor(double s) {
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s);
}

double bump_factor_derivative(double s) {
  if (s <= 0.0) return 0.0;
  const double e = std::exp(-1.0 / s);
  return e / (s * s);
}

// Decreasing smoothstep on [0, 1]: 1 at s = 0, 0 at s = 1, all derivatives
// flat at both ends, strictly decreasing in between.
double smoothstep_down(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = bump_factor(s);
  const double b = bump_factor(1.0 - s);
  return b / (a + b);
}

double smoothstep_down_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = bump_factor(s);
  const double b = bump_factor(1.0 - s);
  const double da = bump_factor_derivative(s);
  const double db = bump_factor_derivative(1.0 - s);
  const double denom = (a + b) * (a + b);
  return (-db * a - b * da) / denom;
}

// 8-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 15,
// which covers (cubic interpolant) x r^k for every moment used here.
constexpr std::array<double, 4> kGl8Nodes = {
    0.1834346424956498, 0.5255324099163290,
    0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGl8Weights = {
    0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

}  // namespace

MollifierProfile MollifierProfile::build(double plateau_radius, int dimension,
                                         int samples) {
  if (!(plateau_radius > 0.0 && plateau_radius < 1.0)) {
    throw std::invalid_argument(
        "MollifierProfile: plateau_radius must lie in (0, 1)");
  }
  if (dimension < 1) {
    throw std::invalid_argument("MollifierProfile: dimension must be >= 1");
  }
  if (samples < 16) {
    throw std::invalid_argument("MollifierProfile: need at least 16 samples");
  }

  MollifierProfile p;
  p.plateau_radius_ = plateau_radius;
  p.dimension_ = dimension;
  p.values_.resize(samples);
  p.derivatives_.resize(samples);

  const double width = 1.0 - plateau_radius;
  for (int i = 0; i < samples; ++i) {
    const double r = static_cast<double>(i) / (samples - 1);
    if (r <= plateau_radius) {
      p.values_[i] = 1.0;
      p.derivatives_[i] = 0.0;
    } else {
      const double s = (r - plateau_radius) / width;
      p.values_[i] = smoothstep_down(s);
      p.derivatives_[i] = smoothstep_down_derivative(s) / width;
    }
  }

  // Scale so that integral_0^1 r^(N-1) mu1(r) dr = 1 / (N omega_N).
  p.scale_ = 1.0;
  const double raw = p.radial_moment(dimension - 1);
  const double target =
      1.0 / (dimension * unit_ball_volume(dimension));
  const double scale = target / raw;
  for (double& v : p.values_) v *= scale;
  for (double& d : p.derivatives_) d *= scale;
  p.scale_ = scale;
  return p;
}

double MollifierProfile::value(double r) const {
  if (r >= 1.0) return 0.0;
  if (r <= 0.0) return values_.front();
  const int n = static_cast<int>(values_.size());
  const double h = 1.0 / (n - 1);
  int i = static_cast<int>(r * (n - 1));
  if (i >= n - 1) i = n - 2;
  const double t = r / h - i;
  const double y0 = values_[i], y1 = values_[i + 1];
  const double d0 = derivatives_[i], d1 = derivatives_[i + 1];
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double MollifierProfile::derivative(double r) const {
  if (r >= 1.0 || r < 0.0) return 0.0;
  const int n = static_cast<int>(values_.size());
  const double h = 1.0 / (n - 1);
  int i = static_cast<int>(r * (n - 1));
  if (i >= n - 1) i = n - 2;
  const double t = r / h - i;
  const double y0 = values_[i], y1 = values_[i + 1];
  const double d0 = derivatives_[i], d1 = derivatives_[i + 1];
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 +
          (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * d1) /
         h;
}

namespace {

// Composite Gauss over the tabulation intervals of [0, 1], with per-interval
// splitting controlled by `splits` (1 = one Gauss panel per knot interval).
double composite_moment(const MollifierProfile& p, int k, bool use_derivative,
                        int splits) {
  const int n = p.sample_count();
  const double h = 1.0 / (n - 1);
  KahanSum total;
  for (int i = 0; i < n - 1; ++i) {
    for (int s = 0; s < splits; ++s) {
      const double a = i * h + s * h / splits;
      const double b = a + h / splits;
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      for (std::size_t q = 0; q < kGl8Nodes.size(); ++q) {
        const double dl = mid - half * kGl8Nodes[q];
        const double dr = mid + half * kGl8Nodes[q];
        const double fl =
            std::pow(dl, k) * (use_derivative ? p.derivative(dl) : p.value(dl));
        const double fr =
            std::pow(dr, k) * (use_derivative ? p.derivative(dr) : p.value(dr));
        total.add(half * kGl8Weights[q] * (fl + fr));
      }
    }
  }
  return total.value();
}

double checked_moment(const MollifierProfile& p, int k, bool use_derivative) {
  const double coarse = composite_moment(p, k, use_derivative, 1);
  const double fine = composite_moment(p, k, use_derivative, 2);
  const double tol = 1e-10 * std::max(1.0, std::abs(fine));
  if (std::abs(fine - coarse) > tol) {
    throw std::runtime_error(
        "MollifierProfile: radial quadrature did not converge; "
        "the profile tabulation looks malformed");
  }
  return fine;
}

}  // namespace

double MollifierProfile::radial_moment(int k) const {
  if (k < 0) throw std::invalid_argument("radial_moment: negative power");
  return checked_moment(*this, k, /*use_derivative=*/false);
}

double MollifierProfile::radial_derivative_moment(int k) const {
  if (k < 0) {
    throw std::invalid_argument("radial_derivative_moment: negative power");
  }
  return checked_moment(*this, k, /*use_derivative=*/true);
}

MollifierConstants mollifier_constants(const MollifierProfile& profile) {
  const int n = profile.dimension();
  const double rn = profile.radial_moment(n);
  MollifierConstants c;
  c.dimension = n;
  // Angular reductions: integrating |x_1| (resp. |x|) over the unit sphere
  // gives 2 omega_{N-1} (resp. the full surface measure N omega_N).
  c.c1 = 2.0 * unit_ball_volume(n - 1) * rn;
  c.m1 = n * unit_ball_volume(n) * rn;
  return c;
}

IdentityReport verify_mollifier_identities(const MollifierProfile& profile,
                                           std::span<const double> scales,
                                           double tolerance) {
  static constexpr std::array<double, 3> kDefaultScales = {0.5, 1.0, 2.0};
  if (scales.empty()) scales = kDefaultScales;

  const int n = profile.dimension();
  const double omega_n = unit_ball_volume(n);
  const double omega_nm1 = unit_ball_volume(n - 1);
  const MollifierConstants consts = mollifier_constants(profile);

  IdentityReport report;
  report.tolerance = tolerance;

  auto push = [&](const std::string& id, double lhs, double rhs,
                  double residual) {
    IdentityResidual r;
    r.id = id;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = residual;
    r.pass = residual <= tolerance;
    report.identities.push_back(r);
  };

  // unit_mass: N omega_N lambda^-N integral_0^lambda r^(N-1) mu1(r/lambda) dr
  // must equal 1 for every smoothing scale.
  {
    double worst = 0.0;
    double last = 1.0;
    for (double lam : scales) {
      const double integral = integrate_or_throw(
          [&](double r) {
            return std::pow(r, n - 1) * profile.value(r / lam);
          },
          0.0, lam, 1e-11, 1e-14);
      const double mass = n * omega_n * integral / std::pow(lam, n);
      last = mass;
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    push("unit_mass", last, 1.0, worst);
  }

  // first_moment: c1 = (2/N)(omega_{N-1}/omega_N) m1. The lhs re-derives c1
  // with the angular factor integrated numerically instead of analytically.
  {
    double angular = 2.0;  // N = 1: the 0-sphere contributes the two points
    if (n >= 2) {
      angular = (n - 1) * omega_nm1 *
                integrate_or_throw(
                    [&](double theta) {
                      return std::abs(std::cos(theta)) *
                             std::pow(std::sin(theta), n - 2);
                    },
                    0.0, std::numbers::pi, 1e-12, 1e-14);
    }
    const double lhs = angular * profile.radial_moment(n);
    const double rhs = (2.0 / n) * (omega_nm1 / omega_n) * consts.m1;
    push("first_moment", lhs, rhs,
         std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }

  // gradient_moment: integral |x| |grad mu_lambda(x)| dx = N for every
  // scale; mu1' <= 0 makes |grad mu_lambda| = -mu1'(|x|/lambda)/lambda^(N+1).
  {
    double worst = 0.0;
    double last = static_cast<double>(n);
    for (double lam : scales) {
      const double integral = integrate_or_throw(
          [&](double r) {
            return std::pow(r, n) * profile.derivative(r / lam);
          },
          0.0, lam, 1e-11, 1e-14);
      const double value =
          -n * omega_n * integral / std::pow(lam, n + 1);
      last = value;
      worst = std::max(worst, std::abs(value - n) / n);
    }
    push("gradient_moment", last, static_cast<double>(n), worst);
  }

  // parts_identity: integral |x|^2 mu1'(|x|) dx = -(N+1) integral |x| mu1.
  {
    const double lhs = n * omega_n * profile.radial_derivative_moment(n + 1);
    const double rhs = -(n + 1) * consts.m1;
    push("parts_identity", lhs, rhs,
         std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }

  report.all_pass = true;
  for (const IdentityResidual& r : report.identities) {
    report.all_pass = report.all_pass && r.pass;
  }
  return report;
}

}  // namespace balaw
