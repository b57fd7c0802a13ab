#pragma once

#include <vector>

#include "flatsc/saddle.hpp"

namespace flatsc {

/// A maximal flat cylinder in a periodic direction v.
///
/// Lengths are reported in units that keep them in the field:
/// circumference = c / |v| and height = h * |v|, so circumference * height
/// is the exact area c * h.
struct Cylinder {
  Vec2 direction;  // canonical
  Scalar circumference;
  Scalar height;
  /// Boundary components, each oriented with the cylinder on its left, in
  /// cyclic order. `bottom` is the one the height was measured from.
  std::vector<SaddleConnection> bottom;
  std::vector<SaddleConnection> top;
  bool simple_bottom() const { return bottom.size() == 1; }
  bool simple_top() const { return top.size() == 1; }
  bool simple() const { return simple_bottom() && simple_top(); }
  Scalar area() const { return circumference * height; }
};

struct Decomposition {
  bool periodic = false;
  std::vector<Cylinder> cylinders;
  /// Every saddle connection in direction +-v (canonical orientation).
  std::vector<SaddleConnection> connections;
};

/// Traces every separatrix in direction +-v. Periodic only if all of them
/// end at marked points within the crossing budget; otherwise periodic is
/// false (direction status unknown).
Decomposition direction_decomposition(const Surface& s, const Vec2& v, long crossing_budget = 10000);

}  // namespace flatsc
