#pragma once

// Structured metric spaces for the transport laboratory.
//
// The taxonomy is closed: the ray [0, inf), bounded intervals, Euclidean
// R^n, finite metric spaces given by an explicit distance matrix, q-products
// (d_X^q + d_Y^q)^(1/q) of two factors, and spherical suspensions over a
// base space. Every descriptor is immutable after construction and carries
// whatever validation its kind requires, so downstream code can assume the
// metric axioms hold.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "otlab/point.hpp"

namespace otlab {

// Invalid user-facing input (bad descriptors, malformed points, weights
// that do not sum to one). The CLI maps this to exit code 2.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested geometric object has no computable representation in the
// given space (e.g. midpoints between distinct atoms of a finite space).
// Callers that can degrade gracefully catch this; it is never a silent guess.
struct not_computable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpaceDescriptor;
using SpacePtr = std::shared_ptr<const SpaceDescriptor>;

// ---------------------------------------------------------------------------
// Descriptor kinds
// ---------------------------------------------------------------------------

struct RaySpace {};  // [0, inf) with |a - b|

struct IntervalSpace {
  double a;
  double b;  // a < b required
};

struct EuclideanSpace {
  std::size_t dim;  // dim >= 1
};

// Explicit n x n distance matrix, row-major. Construction validates
// symmetry, zero diagonal, positivity off the diagonal, and the triangle
// inequality (to 1e-12) in O(n^3).
struct FiniteSpace {
  std::size_t n;
  std::vector<double> dist;
  double d(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
};

struct QProductSpace {
  SpacePtr left;
  SpacePtr right;
  double q;  // q > 1
};

// Spherical suspension: points [x, t] with t in [0, pi], both poles
// identified across the base. strict demands base diameter < pi/2 at
// construction; otherwise a diameter warning flag is recorded instead.
struct SuspensionSpace {
  SpacePtr base;
  bool strict;
  bool diameter_warning;
};

struct SpaceDescriptor {
  std::variant<RaySpace, IntervalSpace, EuclideanSpace, FiniteSpace,
               QProductSpace, SuspensionSpace>
      rep;
  std::optional<double> diameter_cache;

  const char* kind() const;

  bool is_ray() const { return rep.index() == 0; }
  bool is_interval() const { return rep.index() == 1; }
  bool is_euclidean() const { return rep.index() == 2; }
  bool is_finite() const { return rep.index() == 3; }
  bool is_qproduct() const { return rep.index() == 4; }
  bool is_suspension() const { return rep.index() == 5; }

  const FiniteSpace& as_finite() const { return std::get<FiniteSpace>(rep); }
  const QProductSpace& as_qproduct() const {
    return std::get<QProductSpace>(rep);
  }
  const SuspensionSpace& as_suspension() const {
    return std::get<SuspensionSpace>(rep);
  }
  const IntervalSpace& as_interval() const {
    return std::get<IntervalSpace>(rep);
  }
  const EuclideanSpace& as_euclidean() const {
    return std::get<EuclideanSpace>(rep);
  }

  // True for ray and interval: spaces whose points are scalars and whose
  // transport admits the quantile representation.
  bool is_one_dimensional() const { return is_ray() || is_interval(); }
};

// ---------------------------------------------------------------------------
// Construction (validating factories)
// ---------------------------------------------------------------------------

SpacePtr make_ray();
SpacePtr make_interval(double a, double b);
SpacePtr make_euclidean(std::size_t dim);
SpacePtr make_finite(std::size_t n, std::vector<double> dist_row_major);
SpacePtr make_qproduct(SpacePtr left, SpacePtr right, double q);
SpacePtr make_suspension(SpacePtr base, bool strict = true);

// Convenience: finite space from scalar positions on the line.
SpacePtr make_finite_from_line(const std::vector<double>& positions);

// ---------------------------------------------------------------------------
// Core queries
// ---------------------------------------------------------------------------

// Exact for rays/intervals/Euclidean/finite; q-product combines factor
// distances; suspension uses the spherical law of cosines with the cosine
// argument clamped to [-1, 1].
double distance(const SpaceDescriptor& space, const Point& a, const Point& b);

// Throws input_error when p does not describe a point of the space.
void validate_point(const SpaceDescriptor& space, const Point& p);
bool contains_point(const SpaceDescriptor& space, const Point& p);

// Diameter when finite, +inf for unbounded kinds, pi for suspensions.
double diameter(const SpaceDescriptor& space);

// Structural equality of descriptors (used to reject cross-space inputs).
bool spaces_equal(const SpaceDescriptor& a, const SpaceDescriptor& b);

}  // namespace otlab
