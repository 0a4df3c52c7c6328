#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace otlab {

struct Point;
using PointPtr = std::shared_ptr<const Point>;

// Coordinate kinds, one per space family. Pair and suspension coordinates
// nest points behind shared immutable pointers so Point stays a cheap value.
struct ScalarCoord {
  double value;
};

struct VectorCoord {
  std::vector<double> coords;
};

struct IndexCoord {
  std::size_t index;
};

struct PairCoord {
  PointPtr left;
  PointPtr right;
};

// angle in [0, pi]; base is null exactly at the poles (angle 0 or pi).
// Poles are canonical: no base point survives canonicalization.
struct SuspCoord {
  double angle;
  PointPtr base;
};

struct Point {
  std::variant<ScalarCoord, VectorCoord, IndexCoord, PairCoord, SuspCoord> rep;

  static Point scalar(double v);
  static Point vec(std::vector<double> coords);
  static Point index(std::size_t i);
  static Point pair(Point left, Point right);
  // Canonicalizes: angle exactly 0 or pi drops the base and becomes a pole.
  static Point susp(double angle, Point base);
  static Point pole_zero();
  static Point pole_pi();

  bool is_scalar() const { return rep.index() == 0; }
  bool is_vector() const { return rep.index() == 1; }
  bool is_index() const { return rep.index() == 2; }
  bool is_pair() const { return rep.index() == 3; }
  bool is_susp() const { return rep.index() == 4; }
  bool is_pole() const;

  // Accessors hand back the payload, not the coord wrapper; pair and
  // suspension keep their structs because both fields matter.
  double as_scalar() const { return std::get<ScalarCoord>(rep).value; }
  const std::vector<double>& as_vector() const {
    return std::get<VectorCoord>(rep).coords;
  }
  std::size_t as_index() const { return std::get<IndexCoord>(rep).index; }
  const PairCoord& as_pair() const { return std::get<PairCoord>(rep); }
  const SuspCoord& as_susp() const { return std::get<SuspCoord>(rep); }
};

// Equality for atom dedup: exact on indices and poles, coordinate tolerance
// (default 1e-12) on continuous kinds. Mixed kinds are never equal.
bool points_equal(const Point& a, const Point& b, double tol = 1e-12);

// Total order used for canonical sorting of atoms and deterministic
// tie-breaking; compares kind tag first, then coordinates lexicographically.
int compare_points(const Point& a, const Point& b);

// Short human-readable rendering, e.g. "(0.5, [x0, 1.2])" for diagnostics.
std::string point_to_string(const Point& p);

}  // namespace otlab
