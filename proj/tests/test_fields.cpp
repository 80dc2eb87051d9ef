#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "balaw/field_io.hpp"
#include "balaw/functionals.hpp"
#include "balaw/grid.hpp"
#include "balaw/mollifier.hpp"
#include "balaw/quadrature.hpp"
#include "balaw/wallis.hpp"

using namespace balaw;

namespace {

GridPtr line_grid(double lo, double hi, std::int64_t cells) {
  return make_grid(Box{{lo}, {hi}}, {cells});
}

// Reference total variation: the definition, summed in plain order.
double tv_reference(const ScalarField& u) {
  const Grid& g = u.grid();
  const int dim = g.dimension();
  double sum = 0.0;
  std::vector<std::int64_t> idx(dim);
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    g.unflatten(i, idx);
    for (int d = 0; d < dim; ++d) {
      if (idx[d] + 1 < g.cells()[d]) {
        sum += std::abs(u[i + g.stride(d)] - u[i]);
      }
    }
  }
  return sum * std::pow(g.spacing(), dim - 1);
}

// Reference shifted difference: loop over cells, read 0 outside the grid.
double shift_reference(const ScalarField& u,
                       const std::vector<std::int64_t>& steps) {
  const Grid& g = u.grid();
  const int dim = g.dimension();
  double sum = 0.0;
  std::vector<std::int64_t> idx(dim);
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    g.unflatten(i, idx);
    bool inside = true;
    for (int d = 0; d < dim; ++d) {
      idx[d] -= steps[d];
      if (idx[d] < 0 || idx[d] >= g.cells()[d]) inside = false;
    }
    const double behind = inside ? u[g.flat_index(idx)] : 0.0;
    sum += std::abs(u[i] - behind);
    g.unflatten(i, idx);
  }
  return sum * g.cell_volume();
}

// Piecewise-constant field with a zero ring: random values on random spans.
ScalarField random_steps_1d(std::mt19937& rng, std::int64_t cells) {
  GridPtr grid = line_grid(-1.0, 1.0, cells);
  std::vector<double> values(static_cast<std::size_t>(cells), 0.0);
  std::uniform_int_distribution<int> pieces(1, 6);
  std::uniform_real_distribution<double> level(-2.0, 2.0);
  std::uniform_int_distribution<std::int64_t> cell(2, cells - 3);
  const int count = pieces(rng);
  for (int p = 0; p < count; ++p) {
    std::int64_t a = cell(rng);
    std::int64_t b = cell(rng);
    if (a > b) std::swap(a, b);
    const double v = level(rng);
    for (std::int64_t i = a; i <= b; ++i) values[i] += v;
  }
  return ScalarField(grid, std::move(values));
}

ScalarField random_blocks_2d(std::mt19937& rng, std::int64_t cells) {
  GridPtr grid = make_grid(Box{{-1.0, -1.0}, {1.0, 1.0}}, {cells, cells});
  std::vector<double> values(static_cast<std::size_t>(cells * cells), 0.0);
  std::uniform_int_distribution<int> pieces(1, 4);
  std::uniform_real_distribution<double> level(-2.0, 2.0);
  std::uniform_int_distribution<std::int64_t> cell(2, cells - 3);
  const int count = pieces(rng);
  for (int p = 0; p < count; ++p) {
    std::int64_t x0 = cell(rng), x1 = cell(rng);
    std::int64_t y0 = cell(rng), y1 = cell(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const double v = level(rng);
    for (std::int64_t ix = x0; ix <= x1; ++ix) {
      for (std::int64_t iy = y0; iy <= y1; ++iy) {
        values[static_cast<std::size_t>(ix * cells + iy)] += v;
      }
    }
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace

TEST_CASE("grid geometry round-trips") {
  GridPtr g = make_grid(Box{{-1.0, 0.0}, {1.0, 1.0}}, {8, 4});
  CHECK(g->dimension() == 2);
  CHECK(g->spacing() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g->cell_count() == 32);
  CHECK(g->cell_volume() == doctest::Approx(0.0625).epsilon(1e-14));

  std::vector<std::int64_t> idx(2);
  std::vector<double> x(2);
  for (std::int64_t flat = 0; flat < g->cell_count(); ++flat) {
    g->unflatten(flat, idx);
    CHECK(g->flat_index(idx) == flat);
  }
  g->cell_center(0, x);
  CHECK(x[0] == doctest::Approx(-0.875).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(*g == *make_grid(Box{{-1.0, 0.0}, {1.0, 1.0}}, {8, 4}));
}

TEST_CASE("grids reject inconsistent or oversized requests") {
  CHECK_THROWS(make_grid(Box{{0.0, 0.0}, {1.0, 2.0}}, {10, 10}));
  CHECK_THROWS(make_grid(Box{{0.0}, {1.0}}, {1 << 20}, 1 << 10));
}

TEST_CASE("fields validate their values") {
  GridPtr g = line_grid(0.0, 1.0, 4);
  CHECK_THROWS(ScalarField(
      g, {0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}));
  CHECK_THROWS(ScalarField(g, {0.0, 0.0}));

  const ScalarField ones =
      ScalarField::sample(g, [](std::span<const double>) { return 1.0; });
  CHECK(ones.integral() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ones.max_abs() == 1.0);
  CHECK_FALSE(ones.compactly_supported(1, 1e-12));
  CHECK(ScalarField::zeros(g).compactly_supported(1, 0.0));
}

TEST_CASE("total variation of hand-built data") {
  GridPtr g = line_grid(-2.0, 2.0, 64);
  ScalarField u = ScalarField::sample(g, [](std::span<const double> x) {
    return (x[0] > 0.0 && x[0] < 1.0) ? 2.0 : 0.0;
  });
  CHECK(total_variation(u) == doctest::Approx(4.0).epsilon(1e-13));

  const std::int64_t n = 32;
  GridPtr g2 = make_grid(Box{{-1.0, -1.0}, {1.0, 1.0}}, {n, n});
  std::vector<double> values(static_cast<std::size_t>(n * n), 0.0);
  for (std::int64_t ix = 8; ix < 16; ++ix) {
    for (std::int64_t iy = 10; iy < 22; ++iy) {
      values[static_cast<std::size_t>(ix * n + iy)] = 3.0;
    }
  }
  ScalarField block(g2, std::move(values));
  const double h = g2->spacing();
  CHECK(total_variation(block) ==
        doctest::Approx(2.0 * 3.0 * (8 + 12) * h).epsilon(1e-12));
}

TEST_CASE("total variation requires a quiet boundary ring") {
  GridPtr g = line_grid(0.0, 1.0, 8);
  const ScalarField ones =
      ScalarField::sample(g, [](std::span<const double>) { return 1.0; });
  CHECK_THROWS(total_variation(ones));
}

TEST_CASE("total variation matches the reference on random data") {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField u = random_steps_1d(rng, 64);
    CHECK(total_variation(u) ==
          doctest::Approx(tv_reference(u)).epsilon(1e-12));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField u = random_blocks_2d(rng, 24);
    CHECK(total_variation(u) ==
          doctest::Approx(tv_reference(u)).epsilon(1e-12));
  }
}

TEST_CASE("shifted difference: exact cases and the reference loop") {
  GridPtr g = line_grid(-2.0, 2.0, 64);
  const double h = g->spacing();
  ScalarField u = ScalarField::sample(g, [](std::span<const double> x) {
    return (x[0] > 0.0 && x[0] < 1.0) ? 2.0 : 0.0;
  });

  const double zero_shift[] = {0.0};
  CHECK(shifted_l1_difference(u, zero_shift) == 0.0);

  const double one_cell[] = {h};
  CHECK(shifted_l1_difference(u, one_cell) ==
        doctest::Approx(2.0 * 2.0 * h).epsilon(1e-13));

  const double off_lattice[] = {0.4 * h};
  CHECK_THROWS(shifted_l1_difference(u, off_lattice));

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> step(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField v = random_steps_1d(rng, 48);
    const std::vector<std::int64_t> steps{step(rng)};
    const double shift[] = {static_cast<double>(steps[0]) * v.grid().spacing()};
    CHECK(shifted_l1_difference(v, shift) ==
          doctest::Approx(shift_reference(v, steps)).epsilon(1e-12));
  }
}

TEST_CASE("shifted difference is bounded by shift length times variation") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> step(-6, 6);
  int violations = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const ScalarField u = random_steps_1d(rng, 96);
    const double h = u.grid().spacing();
    const double tv = total_variation(u);
    for (int s = 0; s < 10; ++s) {
      const double shift[] = {static_cast<double>(step(rng)) * h};
      const double lhs = shifted_l1_difference(u, shift);
      if (lhs > std::abs(shift[0]) * tv * (1.0 + 1e-12)) ++violations;
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField u = random_blocks_2d(rng, 32);
    const double h = u.grid().spacing();
    const double tv = total_variation(u);
    for (int s = 0; s < 10; ++s) {
      const double shift[] = {static_cast<double>(step(rng)) * h,
                              static_cast<double>(step(rng)) * h};
      const double lhs = shifted_l1_difference(u, shift);
      if (lhs > euclidean_norm(shift) * tv * (1.0 + 1e-12)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("L1 functionals against direct sums") {
  GridPtr g = line_grid(-2.0, 2.0, 40);
  const ScalarField a = ScalarField::sample(
      g, [](std::span<const double> x) { return std::max(0.0, 1.0 - x[0] * x[0]); });
  const ScalarField b = ScalarField::sample(
      g, [](std::span<const double> x) { return 0.5 * std::max(0.0, 1.0 - std::abs(x[0])); });

  double whole = 0.0;
  double inside = 0.0;
  std::vector<double> x(1);
  const Region ball = Region::ball({0.5}, 0.75);
  for (std::int64_t i = 0; i < g->cell_count(); ++i) {
    g->cell_center(i, x);
    const double gap = std::abs(a[i] - b[i]) * g->cell_volume();
    whole += gap;
    if (ball.contains(x)) inside += gap;
  }
  CHECK(l1_distance(a, b) == doctest::Approx(whole).epsilon(1e-13));
  CHECK(l1_distance(a, b, ball) == doctest::Approx(inside).epsilon(1e-13));
  CHECK(l1_norm(a) == doctest::Approx(a.integral()).epsilon(1e-13));

  GridPtr other = line_grid(-2.0, 2.0, 44);
  const ScalarField c = ScalarField::zeros(other);
  CHECK_THROWS(l1_distance(a, c));
}

TEST_CASE("support box reports outer cell boundaries") {
  GridPtr g = line_grid(0.0, 1.0, 10);
  std::vector<double> values(10, 0.0);
  values[3] = 0.5;
  values[6] = -0.25;
  const ScalarField u(g, std::move(values));
  const SupportBox support = support_box(u, 1e-12);
  REQUIRE_FALSE(support.is_empty);
  CHECK(support.lo[0] == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(support.hi[0] == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(support_box(u, 0.6).is_empty);
  CHECK(support_box(ScalarField::zeros(g), 0.0).is_empty);
}

TEST_CASE("mollifier profiles are normalized bumps") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (double plateau : {0.25, 0.5, 0.75}) {
      CAPTURE(dim);
      CAPTURE(plateau);
      const MollifierProfile profile = MollifierProfile::build(plateau, dim);
      CHECK(profile.value(0.0) == profile.normalization());
      CHECK(profile.value(plateau / 2.0) == profile.normalization());
      CHECK(profile.value(1.0) == 0.0);
      CHECK(profile.value(1.5) == 0.0);
      CHECK(profile.derivative(plateau / 2.0) == 0.0);
      CHECK(profile.derivative(1.2) == 0.0);
      CHECK(profile.value(0.5 * (plateau + 1.0)) > 0.0);
      CHECK(profile.derivative(0.5 * (plateau + 1.0)) < 0.0);

      const double radial = integrate_or_throw(
          [&](double r) { return std::pow(r, dim - 1) * profile.value(r); },
          0.0, 1.0, 1e-10, 1e-14);
      const double mass = dim * unit_ball_volume(dim) * radial;
      CHECK(std::abs(mass - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("radial moments agree with adaptive quadrature") {
  const MollifierProfile profile = MollifierProfile::build(0.5, 2);
  for (int k = 1; k <= 3; ++k) {
    const double direct = integrate_or_throw(
        [&](double r) { return std::pow(r, k) * profile.value(r); }, 0.0, 1.0,
        1e-10, 1e-14);
    CHECK(std::abs(profile.radial_moment(k) - direct) <= 1e-9);
    const double derivative_direct = integrate_or_throw(
        [&](double r) { return std::pow(r, k) * profile.derivative(r); }, 0.0,
        1.0, 1e-10, 1e-14);
    CHECK(std::abs(profile.radial_derivative_moment(k) - derivative_direct) <=
          1e-9);
  }
}

TEST_CASE("moment constants match tensor quadrature") {
  // c1 and m1 recomputed through nested adaptive quadrature in Cartesian and
  // cylindrical coordinates, a decomposition the library never uses.
  const MollifierProfile p1 = MollifierProfile::build(0.5, 1);
  const MollifierConstants k1 = mollifier_constants(p1);
  const double direct1 = 2.0 * integrate_or_throw(
      [&](double r) { return r * p1.value(r); }, 0.0, 1.0, 1e-11, 1e-14);
  CHECK(std::abs(k1.c1 - direct1) <= 1e-9);
  CHECK(std::abs(k1.m1 - direct1) <= 1e-9);

  const MollifierProfile p2 = MollifierProfile::build(0.5, 2);
  const MollifierConstants k2 = mollifier_constants(p2);
  const auto plane = [&](const std::function<double(double, double)>& f) {
    return 4.0 * integrate_or_throw(
        [&](double x) {
          const double ymax = std::sqrt(std::max(0.0, 1.0 - x * x));
          return integrate_or_throw(
              [&](double y) { return f(x, y); }, 0.0, ymax, 1e-10, 1e-14);
        },
        0.0, 1.0, 1e-9, 1e-13);
  };
  const double c2 = plane([&](double x, double y) {
    return x * p2.value(std::hypot(x, y));
  });
  const double m2 = plane([&](double x, double y) {
    const double r = std::hypot(x, y);
    return r * p2.value(r);
  });
  CHECK(std::abs(k2.c1 - c2) <= 1e-7);
  CHECK(std::abs(k2.m1 - m2) <= 1e-7);

  const MollifierProfile p3 = MollifierProfile::build(0.5, 3);
  const MollifierConstants k3 = mollifier_constants(p3);
  const auto cylinder = [&](const std::function<double(double, double)>& f) {
    return 4.0 * std::numbers::pi * integrate_or_throw(
        [&](double z) {
          const double rmax = std::sqrt(std::max(0.0, 1.0 - z * z));
          return integrate_or_throw(
              [&](double rho) { return rho * f(z, rho); }, 0.0, rmax, 1e-10,
              1e-14);
        },
        0.0, 1.0, 1e-9, 1e-13);
  };
  const double c3 = cylinder([&](double z, double rho) {
    return z * p3.value(std::hypot(z, rho));
  });
  const double m3 = cylinder([&](double z, double rho) {
    const double r = std::hypot(z, rho);
    return r * p3.value(r);
  });
  CHECK(std::abs(k3.c1 - c3) <= 1e-7);
  CHECK(std::abs(k3.m1 - m3) <= 1e-7);
}

TEST_CASE("moment ratio equals dimension times the cosine moment") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (double plateau : {0.25, 0.5, 0.75}) {
      CAPTURE(dim);
      CAPTURE(plateau);
      const MollifierConstants constants =
          mollifier_constants(MollifierProfile::build(plateau, dim));
      CHECK(std::abs(constants.moment_ratio() -
                     dim * wallis_integral(dim)) <= 1e-8);
    }
  }
}

TEST_CASE("structural identities hold across dimensions and plateaus") {
  const double scales[] = {0.25, 1.0, 3.0};
  for (int dim = 1; dim <= 3; ++dim) {
    for (double plateau : {0.25, 0.5, 0.75}) {
      CAPTURE(dim);
      CAPTURE(plateau);
      const IdentityReport report = verify_mollifier_identities(
          MollifierProfile::build(plateau, dim), scales);
      CHECK(report.all_pass);
      CHECK(report.identities.size() == 4);
      for (const IdentityResidual& identity : report.identities) {
        CAPTURE(identity.id);
        CHECK(identity.pass);
        CHECK(identity.residual < 1e-6);
      }
    }
  }
}

TEST_CASE("finite-scale variation estimator converges on an indicator") {
  GridPtr g = line_grid(-0.5, 1.5, 512);
  const ScalarField u = ScalarField::sample(g, [](std::span<const double> x) {
    return (x[0] > 0.0 && x[0] < 1.0) ? 1.0 : 0.0;
  });
  const MollifierProfile profile = MollifierProfile::build(0.5, 1);
  for (double lambda : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
    CAPTURE(lambda);
    const double estimate = tv_via_mollifier(u, profile, lambda);
    CHECK(std::abs(estimate - 2.0) <= 0.1);
  }
  CHECK_THROWS(tv_via_mollifier(u, profile, 0.5 * g->spacing()));
}

TEST_CASE("snapshot files round-trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "balaw-test-fieldio";
  fs::create_directories(dir);

  GridPtr g = make_grid(Box{{-1.0, -1.0}, {1.0, 1.0}}, {6, 6});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  std::vector<double> values(36);
  for (double& v : values) v = level(rng);
  const ScalarField u(g, values);

  const fs::path binary = dir / "u.bin";
  write_field_binary(binary.string(), u, 0.625);
  const auto [copy, time] = read_field_binary(binary.string());
  CHECK(time == 0.625);
  CHECK(copy.grid() == u.grid());
  REQUIRE(copy.values().size() == u.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(copy.values()[i] == u.values()[i]);
  }

  const fs::path csv = dir / "u.csv";
  write_field_csv(csv.string(), u, 0.625);
  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string line;
  int header = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      ++header;
    } else if (!line.empty()) {
      ++rows;
    }
  }
  CHECK(header > 0);
  CHECK(rows == 36 + 1);

  fs::remove_all(dir);
}
