#pragma once

#include <cmath>

#include "wsndct/error.hpp"

namespace wsndct {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Position a, Position b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Sensing area: a square anchored at (0,0)-(L,L) or a disk centered on the
// origin. Exactly one dimension is meaningful per kind.
class AreaGeometry {
 public:
  enum class Kind { Square, Disk };

  static AreaGeometry square(double side_l) {
    if (!(side_l > 0.0)) throw InvalidArgumentError("AreaGeometry: side length must be positive");
    return AreaGeometry(Kind::Square, side_l);
  }

  static AreaGeometry disk(double radius_r0) {
    if (!(radius_r0 > 0.0)) throw InvalidArgumentError("AreaGeometry: radius must be positive");
    return AreaGeometry(Kind::Disk, radius_r0);
  }

  Kind kind() const { return kind_; }

  double side_l() const {
    if (kind_ != Kind::Square) throw InvalidArgumentError("AreaGeometry: side_l on non-square area");
    return dim_;
  }

  double radius_r0() const {
    if (kind_ != Kind::Disk) throw InvalidArgumentError("AreaGeometry: radius_r0 on non-disk area");
    return dim_;
  }

  // Bounding dimension (L, or 2*R0 for the disk); used to scale field models.
  double extent() const { return kind_ == Kind::Square ? dim_ : 2.0 * dim_; }

  bool contains(Position p) const {
    if (kind_ == Kind::Square) return p.x >= 0.0 && p.x <= dim_ && p.y >= 0.0 && p.y <= dim_;
    // Relative slack absorbs rounding in x^2 + y^2 for points sampled on the rim.
    return p.x * p.x + p.y * p.y <= dim_ * dim_ * (1.0 + 1e-12);
  }

  friend bool operator==(const AreaGeometry& a, const AreaGeometry& b) {
    return a.kind_ == b.kind_ && a.dim_ == b.dim_;
  }

 private:
  AreaGeometry(Kind kind, double dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  double dim_;
};

}  // namespace wsndct
