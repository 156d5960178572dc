#include "ccsolid/bezier.hpp"

#include <string>

namespace ccsolid {

namespace {

void check_parameters(double u, double v, double w) {
  for (double t : {u, v, w}) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw Error("Bezier parameter " + std::to_string(t) + " outside [0, 1]");
    }
  }
}

}  // namespace

Bernstein1D bernstein(double t) {
  const double s = 1.0 - t;
  Bernstein1D b;
  b.value = {s * s * s, 3.0 * t * s * s, 3.0 * t * t * s, t * t * t};
  b.derivative = {-3.0 * s * s, 3.0 * s * (s - 2.0 * t), 3.0 * t * (2.0 * s - t), 3.0 * t * t};
  return b;
}

TrivariateBasis trivariate_basis(double u, double v, double w) {
  const Bernstein1D bu = bernstein(u), bv = bernstein(v), bw = bernstein(w);
  TrivariateBasis out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const int i = bezier_index(a, b, c);
        out.value[i] = bu.value[a] * bv.value[b] * bw.value[c];
        out.gradient[i] = Vec3(bu.derivative[a] * bv.value[b] * bw.value[c],
                               bu.value[a] * bv.derivative[b] * bw.value[c],
                               bu.value[a] * bv.value[b] * bw.derivative[c]);
      }
    }
  }
  return out;
}

Vec3 BezierVolume::evaluate(double u, double v, double w) const {
  check_parameters(u, v, w);
  const Bernstein1D bu = bernstein(u), bv = bernstein(v), bw = bernstein(w);
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double ab = bu.value[a] * bv.value[b];
      for (int c = 0; c < 4; ++c) x += ab * bw.value[c] * points[bezier_index(a, b, c)];
    }
  }
  return x;
}

Mat3 BezierVolume::jacobian(double u, double v, double w) const {
  check_parameters(u, v, w);
  const TrivariateBasis basis = trivariate_basis(u, v, w);
  Mat3 j = Mat3::Zero();
  for (int i = 0; i < 64; ++i) j += points[i] * basis.gradient[i].transpose();
  return j;
}

BezierVolume BezierVolume::identity() {
  BezierVolume vol;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) vol(a, b, c) = Vec3(a, b, c) / 3.0;
    }
  }
  return vol;
}

}  // namespace ccsolid
