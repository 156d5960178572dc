#pragma once

#include <array>

#include "ccsolid/types.hpp"

namespace ccsolid {

/// Flat index of control point P_abc, a/b/c in 0..3, (a,b,c) row-major.
constexpr int bezier_index(int a, int b, int c) { return (a * 4 + b) * 4 + c; }

/// Cubic Bernstein values and first derivatives at t.
struct Bernstein1D {
  std::array<double, 4> value;
  std::array<double, 4> derivative;
};
Bernstein1D bernstein(double t);

/// The 64 tensor-product basis functions and their parametric gradients.
struct TrivariateBasis {
  std::array<double, 64> value;
  std::array<Vec3, 64> gradient;  // d/du, d/dv, d/dw
};
TrivariateBasis trivariate_basis(double u, double v, double w);

/// Tricubic Bezier volume. Parameter axes follow the owning cell: u runs from
/// corner 0 to 1, v from 0 to 3, w from 0 to 4.
struct BezierVolume {
  std::array<Vec3, 64> points;

  const Vec3& operator()(int a, int b, int c) const { return points[bezier_index(a, b, c)]; }
  Vec3& operator()(int a, int b, int c) { return points[bezier_index(a, b, c)]; }

  /// Throws Error when a parameter leaves [0, 1].
  Vec3 evaluate(double u, double v, double w) const;
  /// Columns are dx/du, dx/dv, dx/dw.
  Mat3 jacobian(double u, double v, double w) const;

  /// Control net of the identity map on [0,1]^3 (Greville points a/3, b/3, c/3).
  static BezierVolume identity();
};

}  // namespace ccsolid
