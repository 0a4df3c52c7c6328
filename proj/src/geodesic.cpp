#include "otlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace otlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Coordinatewise affine interpolation. Equal sub-points short-circuit, so
// constant index/suspension coordinates ride along inside products.
bool can_lerp(const Point& a, const Point& b) {
  if (points_equal(a, b, 0.0)) return true;
  if (a.rep.index() != b.rep.index()) return false;
  switch (a.rep.index()) {
    case 0:
      return true;
    case 1:
      return a.as_vector().size() == b.as_vector().size();
    case 3:
      return can_lerp(*a.as_pair().left, *b.as_pair().left) &&
             can_lerp(*a.as_pair().right, *b.as_pair().right);
    default:
      return false;  // distinct indices / suspension points
  }
}

Point lerp_point(const Point& a, const Point& b, double s) {
  if (points_equal(a, b, 0.0)) return a;
  switch (a.rep.index()) {
    case 0:
      return Point::scalar((1.0 - s) * a.as_scalar() +
                           s * b.as_scalar());
    case 1: {
      const auto& u = a.as_vector();
      const auto& v = b.as_vector();
      std::vector<double> w(u.size());
      for (std::size_t k = 0; k < u.size(); ++k)
        w[k] = (1.0 - s) * u[k] + s * v[k];
      return Point::vec(std::move(w));
    }
    case 3:
      return Point::pair(lerp_point(*a.as_pair().left, *b.as_pair().left, s),
                         lerp_point(*a.as_pair().right, *b.as_pair().right, s));
    default:
      throw not_computable("no affine interpolation between " +
                           point_to_string(a) + " and " + point_to_string(b));
  }
}

}  // namespace

Point canonical_base_point(const SpaceDescriptor& base) {
  switch (base.rep.index()) {
    case 0:
      return Point::scalar(0.0);
    case 1:
      return Point::scalar(base.as_interval().a);
    case 2:
      return Point::vec(std::vector<double>(base.as_euclidean().dim, 0.0));
    case 3:
      return Point::index(0);
    default:
      throw not_computable(
          "no canonical base point for the pole-to-pole meridian");
  }
}

// ---------------------------------------------------------------------------
// GeodesicPath
// ---------------------------------------------------------------------------

Point GeodesicPath::eval(double s) const {
  if (const auto* lin = std::get_if<LinearSegment>(&rep)) {
    (void)lin;
    Point p = lerp_point(start, end, s);
    validate_point(*space, p);
    return p;
  }
  if (const auto* mer = std::get_if<MeridianSegment>(&rep)) {
    double angle = mer->angle0 + s * (mer->angle1 - mer->angle0);
    if (angle < 0.0 || angle > kPi)
      throw input_error("meridian segment evaluated outside [0, pi]");
    return Point::susp(angle, mer->base);
  }
  // Finite path: scan the intermediate set and take its first (lowest
  // index) member.
  if (s == 0.0) return start;
  if (s == 1.0) return end;
  if (s < 0.0 || s > 1.0)
    throw input_error("finite paths do not extend outside [0, 1]");
  IntermediateResult r = intermediate_points(*space, start, end, s);
  if (!r.computable)
    throw not_computable("intermediate set not computable on this space");
  if (r.points.empty())
    throw not_computable("no intermediate point exists at this parameter");
  return r.points.front();
}

GeodesicPath geodesic(SpacePtr space, const Point& x, const Point& y) {
  validate_point(*space, x);
  validate_point(*space, y);
  double speed = distance(*space, x, y);
  if (points_equal(x, y, 0.0) || can_lerp(x, y))
    return GeodesicPath{space, x, y, speed, LinearSegment{}};

  if (space->is_finite() || space->is_qproduct())
    return GeodesicPath{space, x, y, speed, FinitePath{}};

  if (space->is_suspension()) {
    const auto& susp = space->as_suspension();
    const auto& sx = x.as_susp();
    const auto& sy = y.as_susp();
    if (sx.base == nullptr && sy.base == nullptr) {
      // Antipodal poles: infinitely many meridians, resolved canonically.
      Point base = canonical_base_point(*susp.base);
      return GeodesicPath{space, x, y, speed,
                          MeridianSegment{base, sx.angle, sy.angle}};
    }
    if (sx.base == nullptr)
      return GeodesicPath{space, x, y, speed,
                          MeridianSegment{*sy.base, sx.angle, sy.angle}};
    if (sy.base == nullptr)
      return GeodesicPath{space, x, y, speed,
                          MeridianSegment{*sx.base, sx.angle, sy.angle}};
    if (points_equal(*sx.base, *sy.base))
      return GeodesicPath{space, x, y, speed,
                          MeridianSegment{*sx.base, sx.angle, sy.angle}};
    throw not_computable(
        "no representable geodesic between distinct meridians");
  }
  throw not_computable("no representable geodesic for this pair");
}

// ---------------------------------------------------------------------------
// Intermediate points
// ---------------------------------------------------------------------------

IntermediateResult intermediate_points(const SpaceDescriptor& space,
                                       const Point& x, const Point& y,
                                       double t, double tol) {
  if (t < 0.0 || t > 1.0)
    throw input_error("intermediate level t must lie in [0, 1]");
  double d = distance(space, x, y);
  if (points_equal(x, y, 0.0)) return {true, {x}};

  switch (space.rep.index()) {
    case 0:
    case 1:
    case 2:
      return {true, {lerp_point(x, y, t)}};
    case 3: {
      // Exhaustive scan: z with d(x,z) = t d and d(z,y) = (1-t) d.
      const auto& fin = space.as_finite();
      std::size_t i = x.as_index(), j = y.as_index();
      std::vector<Point> out;
      for (std::size_t z = 0; z < fin.n; ++z)
        if (std::fabs(fin.d(i, z) - t * d) <= tol &&
            std::fabs(fin.d(z, j) - (1.0 - t) * d) <= tol)
          out.push_back(Point::index(z));
      return {true, std::move(out)};
    }
    case 4: {
      // A point of the q-product is t-intermediate iff both coordinates
      // are t-intermediate in their factors.
      const auto& qp = space.as_qproduct();
      IntermediateResult l = intermediate_points(
          *qp.left, *x.as_pair().left, *y.as_pair().left, t, tol);
      IntermediateResult r = intermediate_points(
          *qp.right, *x.as_pair().right, *y.as_pair().right, t, tol);
      if (!l.computable || !r.computable) return {false, {}};
      std::vector<Point> out;
      for (const Point& a : l.points)
        for (const Point& b : r.points) out.push_back(Point::pair(a, b));
      return {true, std::move(out)};
    }
    case 5: {
      const auto& susp = space.as_suspension();
      const auto& sx = x.as_susp();
      const auto& sy = y.as_susp();
      if (sx.base == nullptr && sy.base == nullptr) {
        // Antipodal poles: the full latitude fiber at t pi, enumerable
        // only over a finite base.
        if (!susp.base->is_finite()) return {false, {}};
        std::vector<Point> out;
        for (std::size_t z = 0; z < susp.base->as_finite().n; ++z)
          out.push_back(Point::susp(t * kPi, Point::index(z)));
        return {true, std::move(out)};
      }
      if (sx.base == nullptr || sy.base == nullptr ||
          points_equal(*sx.base, *sy.base)) {
        // Single meridian: angles interpolate linearly and the point is
        // unique (distinct meridians stay strictly farther away).
        const Point& base = sx.base ? *sx.base : *sy.base;
        double angle = (1.0 - t) * sx.angle + t * sy.angle;
        return {true, {Point::susp(angle, base)}};
      }
      return {false, {}};
    }
  }
  return {false, {}};
}

// ---------------------------------------------------------------------------
// Structure maps
// ---------------------------------------------------------------------------

Point scaling_map(const SpaceDescriptor& suspension, double s,
                  const Point& p) {
  if (!suspension.is_suspension())
    throw input_error("scaling map needs a suspension space");
  validate_point(suspension, p);
  if (s < 0.0) throw input_error("scaling factor must be >= 0");
  const auto& sp = p.as_susp();
  if (sp.base == nullptr) {
    if (sp.angle == 0.0) return p;  // zero pole fixed by every L_s
    if (s == 1.0) return p;
    throw input_error("L_s moves the pi pole only at s = 1");
  }
  double angle = s * sp.angle;
  if (angle > kPi)
    throw input_error("scaled latitude leaves [0, pi]");
  return Point::susp(angle, *sp.base);
}

Point fiber_projection(const SpaceDescriptor& space, double t, const Point& p,
                       const std::optional<Point>& pole_base) {
  validate_point(space, p);
  if (space.is_qproduct()) {
    const auto& qp = space.as_qproduct();
    if (!qp.right->is_ray() && !qp.right->is_interval())
      throw input_error("fiber projection needs a 1-D height factor");
    Point height = Point::scalar(t);
    validate_point(*qp.right, height);
    return Point::pair(*p.as_pair().left, height);
  }
  if (space.is_suspension()) {
    if (t < 0.0 || t > kPi)
      throw input_error("suspension latitude must lie in [0, pi]");
    const auto& sp = p.as_susp();
    if (sp.base != nullptr) return Point::susp(t, *sp.base);
    if (t == 0.0) return Point::pole_zero();
    if (t == kPi) return Point::pole_pi();
    // A pole fixes no meridian; the caller chooses its extension.
    if (!pole_base)
      throw input_error(
          "fiber projection of a pole needs an extension base point");
    validate_point(*space.as_suspension().base, *pole_base);
    return Point::susp(t, *pole_base);
  }
  throw input_error("fiber projection needs a cylinder or a suspension");
}

Point meridian_projection(const SpaceDescriptor& suspension, const Point& y,
                          const Point& p) {
  if (!suspension.is_suspension())
    throw input_error("meridian projection needs a suspension space");
  const auto& base = *suspension.as_suspension().base;
  validate_point(base, y);
  validate_point(suspension, p);
  const auto& sp = p.as_susp();
  if (sp.base == nullptr) return p;  // poles lie on every meridian
  double d = distance(base, *sp.base, y);
  if (d == 0.0) return p;  // already on the target meridian
  if (!(d < kPi / 2))
    throw input_error("meridian projection requires d(x, y) < pi/2");
  if (sp.angle > kPi / 2)
    throw input_error("meridian projection is defined for latitudes <= pi/2");
  if (sp.angle == kPi / 2) return Point::susp(kPi / 2, y);
  double angle = std::atan(std::cos(d) * std::tan(sp.angle));
  return Point::susp(angle, y);
}

// ---------------------------------------------------------------------------
// Position conditions
// ---------------------------------------------------------------------------

namespace {

constexpr double kConditionSlack = 1e-12;

const FiniteSpace& require_finite(const SpaceDescriptor& space,
                                  const char* what) {
  if (!space.is_finite())
    throw input_error(std::string(what) + " is defined on finite spaces");
  return space.as_finite();
}

}  // namespace

std::optional<Point> condition_a_check(const SpaceDescriptor& finite_space,
                                       const std::vector<Point>& targets) {
  const auto& fin = require_finite(finite_space, "condition A");
  if (targets.empty()) throw input_error("condition A needs targets");
  std::vector<std::size_t> ys;
  for (const Point& t : targets) {
    validate_point(finite_space, t);
    ys.push_back(t.as_index());
  }
  for (std::size_t o = 0; o < fin.n; ++o) {
    bool ok = true;
    for (std::size_t y : ys) {
      // y in J(o): o strictly between y and some z (both legs positive).
      bool member = false;
      for (std::size_t z = 0; z < fin.n && !member; ++z) {
        if (z == o) continue;
        double leg_yo = fin.d(y, o), leg_oz = fin.d(o, z);
        member = leg_yo > kConditionSlack && leg_oz > kConditionSlack &&
                 std::fabs(fin.d(y, z) - (leg_yo + leg_oz)) <= kConditionSlack;
      }
      if (!member) {
        ok = false;
        break;
      }
    }
    if (ok) return Point::index(o);
  }
  return std::nullopt;
}

std::optional<Point> condition_b_check(const SpaceDescriptor& finite_space,
                                       const std::vector<Point>& x_points,
                                       const std::vector<double>& t_values) {
  const auto& fin = require_finite(finite_space, "condition B");
  if (x_points.empty() || t_values.empty())
    throw input_error("condition B needs points and latitudes");
  std::vector<std::size_t> xs;
  for (const Point& x : x_points) {
    validate_point(finite_space, x);
    xs.push_back(x.as_index());
  }
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = a + 1; b < xs.size(); ++b)
      if (xs[a] == xs[b])
        throw input_error("condition B points must be pairwise distinct");
  for (double t : t_values)
    if (!(t > 0.0) || !(t < kPi) || t == kPi / 2)
      throw input_error("condition B latitudes must avoid 0, pi/2, pi");
  for (std::size_t a = 0; a < t_values.size(); ++a)
    for (std::size_t b = a + 1; b < t_values.size(); ++b)
      if (t_values[a] == t_values[b])
        throw input_error("condition B latitudes must be pairwise distinct");

  for (std::size_t o = 0; o < fin.n; ++o) {
    std::vector<double> products;
    for (double t : t_values)
      for (std::size_t m : xs)
        products.push_back(std::tan(t) * std::cos(fin.d(o, m)));
    bool distinct = true;
    for (std::size_t a = 0; a < products.size() && distinct; ++a)
      for (std::size_t b = a + 1; b < products.size() && distinct; ++b)
        if (std::fabs(products[a] - products[b]) <= kConditionSlack)
          distinct = false;
    if (distinct) return Point::index(o);
  }
  return std::nullopt;
}

}  // namespace otlab
