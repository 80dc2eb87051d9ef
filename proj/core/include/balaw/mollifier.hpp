#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace balaw {

/// Radial profile mu1 of a smooth compactly supported mollifier on the unit
/// ball of R^N: constant on [0, plateau_radius], then decreasing to zero at
/// r = 1 through an exponential smoothstep, so that every derivative vanishes
/// at r = 0 and r = 1. The amplitude is scaled so that
///   integral_0^1 r^(N-1) mu1(r) dr = 1 / (N omega_N),
/// i.e. the induced mollifier mu(x) = mu1(|x|) has unit mass in R^N.
///
/// The profile is stored as a dense radial tabulation (values and exact
/// derivatives) and evaluated by cubic Hermite interpolation between knots.
/// All downstream quadrature treats the interpolant as the definition of mu1.
class MollifierProfile {
 public:
  /// Builds and normalizes a profile. samples is the tabulation density,
  /// a config knob; the default resolves the transition zone to well below
  /// every tolerance used in this library.
  static MollifierProfile build(double plateau_radius, int dimension,
                                int samples = 4096);

  double value(double r) const;       // mu1(r), 0 for r >= 1
  double derivative(double r) const;  // mu1'(r), 0 outside (plateau, 1)

  double plateau_radius() const { return plateau_radius_; }
  int dimension() const { return dimension_; }
  /// Plateau height after normalization.
  double normalization() const { return scale_; }
  int sample_count() const { return static_cast<int>(values_.size()); }
  std::span<const double> samples() const { return values_; }
  std::span<const double> derivative_samples() const { return derivatives_; }

  /// integral_0^1 r^k mu1(r) dr by composite Gauss quadrature over the
  /// tabulation intervals, with one refinement round as a convergence check.
  /// Throws when the two rounds disagree beyond tolerance (malformed profile).
  double radial_moment(int k) const;

  /// Same quadrature machinery for integral_0^1 r^k mu1'(r) dr.
  double radial_derivative_moment(int k) const;

 private:
  MollifierProfile() = default;

  double plateau_radius_ = 0.5;
  int dimension_ = 1;
  double scale_ = 1.0;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

/// The two moment constants of a profile:
///   c1 = integral over R^N of |x_1| mu1(|x|) dx
///   m1 = integral over R^N of |x|  mu1(|x|) dx
/// computed through the radial moment with the angular factor reduced
/// analytically (the angular integrals collapse to Wallis-type constants).
struct MollifierConstants {
  double c1 = 0.0;
  double m1 = 0.0;
  int dimension = 0;

  double moment_ratio() const { return m1 / c1; }
};

MollifierConstants mollifier_constants(const MollifierProfile& profile);

/// One verified identity of the profile; lhs and rhs are evaluated through
/// independent quadrature paths so the residual measures real numeric error.
struct IdentityResidual {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // max residual over the probed scales
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityResidual> identities;
  double tolerance = 0.0;
  bool all_pass = false;
};

/// Checks the four structural identities of the mollifier family:
///   unit_mass:        integral of the scaled mollifier equals 1 (per scale)
///   first_moment:     c1 = (2/N)(omega_{N-1}/omega_N) m1
///   gradient_moment:  integral |x| |grad mu(x)| dx = N, independent of scale
///   parts_identity:   integral |x|^2 mu1'(|x|) dx = -(N+1) integral |x| mu1
/// scales lists the smoothing radii probed by the scale-dependent checks.
IdentityReport verify_mollifier_identities(
    const MollifierProfile& profile,
    std::span<const double> scales = {},
    double tolerance = 1e-6);

}  // namespace balaw
