#pragma once

// Point-level geometry on top of the space taxonomy: constant-speed
// geodesic segments, t-intermediate point sets M^t(x, y), the suspension
// scaling map L_s, fiber projections T_t, meridian projections, and the
// two finite-space position conditions used by the rigidity experiments.

#include <optional>
#include <vector>

#include "otlab/space.hpp"

namespace otlab {

// ---------------------------------------------------------------------------
// Geodesic segments
// ---------------------------------------------------------------------------

// Coordinatewise affine interpolation. Covers scalars, vectors, and pairs
// of those; an index coordinate is allowed only when constant.
struct LinearSegment {};

// Fixed base point, angle interpolated linearly. Holds same-meridian pairs,
// pole-anchored pairs, and the pole-to-pole segment through a chosen base.
struct MeridianSegment {
  Point base;
  double angle0;
  double angle1;
};

// Finite-space pairs have no closed-form parameterization; evaluation scans
// the t-intermediate set on demand and picks the lowest-index point.
struct FinitePath {};

struct GeodesicPath {
  SpacePtr space;
  Point start;
  Point end;
  double speed;  // = d(start, end); the segment is constant speed on [0, 1]
  std::variant<LinearSegment, MeridianSegment, FinitePath> rep;

  // Evaluate at parameter s. s in [0, 1] always lands in the space;
  // linear segments accept s outside [0, 1] as long as the result stays
  // in the space (ray extensions use this). Throws not_computable when a
  // finite-path scan comes up empty, input_error when out of the space.
  Point eval(double s) const;
};

// Builds the segment or throws not_computable for configurations with no
// representable geodesic (distinct finite atoms, distinct non-pole
// suspension meridians, infinite pole-to-pole meridian families are
// resolved through the lowest-index base point of a finite base).
GeodesicPath geodesic(SpacePtr space, const Point& x, const Point& y);

// Deterministic representative used wherever an arbitrary base point is
// called for (pole meridians, pole fiber extensions): index 0 on finite
// bases, the left endpoint / origin on the continuous kinds.
Point canonical_base_point(const SpaceDescriptor& base);

// ---------------------------------------------------------------------------
// Intermediate points M^t(x, y)
// ---------------------------------------------------------------------------

// M^t(x, y) = { z : d(x, z) = t d(x, y) and d(z, y) = (1 - t) d(x, y) }.
// computable == false means the set cannot be enumerated in this space
// (never a silent guess); an empty points list is a genuine empty set.
struct IntermediateResult {
  bool computable;
  std::vector<Point> points;
};

IntermediateResult intermediate_points(const SpaceDescriptor& space,
                                       const Point& x, const Point& y,
                                       double t, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Structure maps
// ---------------------------------------------------------------------------

// Suspension scaling L_s([x, t]) = [x, s t]. Requires s t in [0, pi].
// The zero pole is fixed for every s; the pi pole is only valid at s = 1.
Point scaling_map(const SpaceDescriptor& suspension, double s, const Point& p);

// Fiber projection T_t. On a cylinder (q-product whose right factor is the
// ray or an interval) T_t(x, s) = (x, t). On a suspension T_t([x, u]) =
// [x, t]; a pole input needs pole_base to choose its meridian (poles carry
// no base of their own, any choice is isometrically equivalent).
Point fiber_projection(const SpaceDescriptor& space, double t, const Point& p,
                       const std::optional<Point>& pole_base = std::nullopt);

// Meridian projection onto the half great circle through base point y:
// [x, t] -> [y, atan(cos(d(x, y)) tan t)] for t < pi/2, [y, pi/2] at the
// equator, poles fixed. Requires d(x, y) < pi/2.
Point meridian_projection(const SpaceDescriptor& suspension, const Point& y,
                          const Point& p);

// ---------------------------------------------------------------------------
// Position conditions on finite spaces
// ---------------------------------------------------------------------------

// Looks for a point x_o such that every target y lies in
// J(x_o) = { y : exists z with d(y, z) = d(y, x_o) + d(x_o, z) },
// i.e. x_o is strictly between y and some z (both legs longer than the
// slack 1e-12). Returns the lowest-index qualifying point, or nullopt.
std::optional<Point> condition_a_check(const SpaceDescriptor& finite_space,
                                       const std::vector<Point>& targets);

// Looks for a point x_o making all products tan(t_j) cos(d(x_o, x_m))
// pairwise distinct (separation > 1e-12). t values must avoid pi/2 and be
// pairwise distinct; x points must be pairwise distinct.
std::optional<Point> condition_b_check(const SpaceDescriptor& finite_space,
                                       const std::vector<Point>& x_points,
                                       const std::vector<double>& t_values);

}  // namespace otlab
