#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace balaw {

using Vec = std::vector<double>;

inline double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Axis-aligned spatial box [lo_d, hi_d] per axis.
struct Box {
  Vec lo;
  Vec hi;

  int dimension() const { return static_cast<int>(lo.size()); }

  void validate() const {
    if (lo.size() != hi.size()) {
      throw std::invalid_argument("Box: lo/hi dimension mismatch");
    }
    for (std::size_t d = 0; d < lo.size(); ++d) {
      if (!(lo[d] <= hi[d])) {
        throw std::invalid_argument("Box: lo > hi on axis " +
                                    std::to_string(d));
      }
    }
  }

  Box dilated(double margin) const {
    Box out = *this;
    for (std::size_t d = 0; d < lo.size(); ++d) {
      out.lo[d] -= margin;
      out.hi[d] += margin;
    }
    return out;
  }

  bool contains(const Box& inner) const {
    for (std::size_t d = 0; d < lo.size(); ++d) {
      if (inner.lo[d] < lo[d] || inner.hi[d] > hi[d]) return false;
    }
    return true;
  }

  double extent(int axis) const { return hi[axis] - lo[axis]; }
};

/// Bounding box of the cells where a field exceeds a threshold. Tracks
/// emptiness explicitly so that zero fields merge as the neutral element.
struct SupportBox {
  Vec lo;
  Vec hi;
  bool is_empty = true;

  static SupportBox empty(int dimension) {
    SupportBox s;
    s.lo.assign(dimension, 0.0);
    s.hi.assign(dimension, 0.0);
    s.is_empty = true;
    return s;
  }

  void merge(const SupportBox& other) {
    if (other.is_empty) return;
    if (is_empty) {
      *this = other;
      return;
    }
    for (std::size_t d = 0; d < lo.size(); ++d) {
      lo[d] = std::min(lo[d], other.lo[d]);
      hi[d] = std::max(hi[d], other.hi[d]);
    }
  }

  SupportBox dilated(double margin) const {
    if (is_empty) return *this;
    SupportBox out = *this;
    for (std::size_t d = 0; d < lo.size(); ++d) {
      out.lo[d] -= margin;
      out.hi[d] += margin;
    }
    return out;
  }

  bool contained_in(const SupportBox& outer) const {
    if (is_empty) return true;
    if (outer.is_empty) return false;
    for (std::size_t d = 0; d < lo.size(); ++d) {
      if (lo[d] < outer.lo[d] || hi[d] > outer.hi[d]) return false;
    }
    return true;
  }

  Box as_box() const {
    if (is_empty) throw std::logic_error("SupportBox: empty support");
    return Box{lo, hi};
  }
};

/// Time x space x value slab: [time_lo, time_hi] x space x [-value_bound,
/// value_bound]. The domain over which coefficient sup norms are sampled.
struct DomainSlab {
  double time_lo = 0.0;
  double time_hi = 0.0;
  Box space;
  double value_bound = 0.0;

  void validate() const {
    if (!(time_lo <= time_hi)) {
      throw std::invalid_argument("DomainSlab: time_lo > time_hi");
    }
    if (value_bound < 0.0) {
      throw std::invalid_argument("DomainSlab: negative value bound");
    }
    space.validate();
  }
};

/// Region selector for L1 distances: whole grid or a closed ball. Membership
/// of a cell is decided by its center.
struct Region {
  enum class Kind { whole, ball };
  Kind kind = Kind::whole;
  Vec center;
  double radius = 0.0;

  static Region whole() { return Region{}; }
  static Region ball(Vec center, double radius) {
    Region r;
    r.kind = Kind::ball;
    r.center = std::move(center);
    r.radius = radius;
    return r;
  }

  bool contains(std::span<const double> x) const {
    if (kind == Kind::whole) return true;
    double s = 0.0;
    for (std::size_t d = 0; d < center.size(); ++d) {
      const double dx = x[d] - center[d];
      s += dx * dx;
    }
    return std::sqrt(s) <= radius;
  }
};

}  // namespace balaw
