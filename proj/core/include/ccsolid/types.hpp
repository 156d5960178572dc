#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ccsolid {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Index = std::int32_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Local hexahedron frame shared by every module.
//
//        7-------6
//       /|      /|        w
//      4-------5 |        |  v
//      | 3-----|-2        | /
//      |/      |/         |/
//      0-------1          +---- u
//
// Corner k sits at parametric position kCornerBits[k] in {0,1}^3.
namespace hex {

inline constexpr std::array<std::array<int, 3>, 8> kCornerBits{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

inline constexpr int corner_at(int i, int j, int k) {
  constexpr std::array<int, 8> lut{0, 4, 3, 7, 1, 5, 2, 6};  // indexed by i*4 + j*2 + k
  return lut[i * 4 + j * 2 + k];
}

inline constexpr std::array<std::array<int, 2>, 12> kEdges{{
    {0, 1}, {3, 2}, {4, 5}, {7, 6},  // along u
    {0, 3}, {1, 2}, {4, 7}, {5, 6},  // along v
    {0, 4}, {1, 5}, {3, 7}, {2, 6},  // along w
}};

// Faces as corner cycles, outward orientation. Face 2*axis + side is the face
// where parametric coordinate `axis` equals `side`.
inline constexpr std::array<std::array<int, 4>, 6> kFaces{{
    {0, 4, 7, 3},  // u = 0
    {1, 2, 6, 5},  // u = 1
    {0, 1, 5, 4},  // v = 0
    {3, 7, 6, 2},  // v = 1
    {0, 3, 2, 1},  // w = 0
    {4, 5, 6, 7},  // w = 1
}};

/// Local edge index joining corners a and b, or -1.
inline constexpr int edge_between(int a, int b) {
  for (int e = 0; e < 12; ++e) {
    if ((kEdges[e][0] == a && kEdges[e][1] == b) || (kEdges[e][0] == b && kEdges[e][1] == a)) {
      return e;
    }
  }
  return -1;
}

/// Number of parametric coordinates in which corners a and b differ.
inline constexpr int corner_distance(int a, int b) {
  int d = 0;
  for (int t = 0; t < 3; ++t) d += kCornerBits[a][t] != kCornerBits[b][t];
  return d;
}

}  // namespace hex
}  // namespace ccsolid
