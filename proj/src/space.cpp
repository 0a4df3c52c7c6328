#include "otlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace otlab {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

}  // namespace

// ---------------------------------------------------------------------------
// Point
// ---------------------------------------------------------------------------

Point Point::scalar(double v) { return Point{ScalarCoord{v}}; }

Point Point::vec(std::vector<double> coords) {
  return Point{VectorCoord{std::move(coords)}};
}

Point Point::index(std::size_t i) { return Point{IndexCoord{i}}; }

Point Point::pair(Point left, Point right) {
  return Point{PairCoord{std::make_shared<const Point>(std::move(left)),
                         std::make_shared<const Point>(std::move(right))}};
}

Point Point::susp(double angle, Point base) {
  if (angle == 0.0) return pole_zero();
  if (angle == kPi) return pole_pi();
  return Point{
      SuspCoord{angle, std::make_shared<const Point>(std::move(base))}};
}

Point Point::pole_zero() { return Point{SuspCoord{0.0, nullptr}}; }

Point Point::pole_pi() { return Point{SuspCoord{kPi, nullptr}}; }

bool Point::is_pole() const {
  return is_susp() && as_susp().base == nullptr;
}

bool points_equal(const Point& a, const Point& b, double tol) {
  if (a.rep.index() != b.rep.index()) return false;
  switch (a.rep.index()) {
    case 0:
      return std::fabs(a.as_scalar() - b.as_scalar()) <= tol;
    case 1: {
      const auto& u = a.as_vector();
      const auto& v = b.as_vector();
      if (u.size() != v.size()) return false;
      for (std::size_t k = 0; k < u.size(); ++k)
        if (std::fabs(u[k] - v[k]) > tol) return false;
      return true;
    }
    case 2:
      return a.as_index() == b.as_index();
    case 3:
      return points_equal(*a.as_pair().left, *b.as_pair().left, tol) &&
             points_equal(*a.as_pair().right, *b.as_pair().right, tol);
    case 4: {
      const auto& s = a.as_susp();
      const auto& t = b.as_susp();
      // Poles match only poles, and exactly; proximity never promotes a
      // nearby point to a pole.
      if ((s.base == nullptr) != (t.base == nullptr)) return false;
      if (s.base == nullptr) return s.angle == t.angle;
      return std::fabs(s.angle - t.angle) <= tol &&
             points_equal(*s.base, *t.base, tol);
    }
  }
  return false;
}

namespace {

int cmp_double(double a, double b) {
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

}  // namespace

int compare_points(const Point& a, const Point& b) {
  if (a.rep.index() != b.rep.index())
    return a.rep.index() < b.rep.index() ? -1 : 1;
  switch (a.rep.index()) {
    case 0:
      return cmp_double(a.as_scalar(), b.as_scalar());
    case 1: {
      const auto& u = a.as_vector();
      const auto& v = b.as_vector();
      if (u.size() != v.size()) return u.size() < v.size() ? -1 : 1;
      for (std::size_t k = 0; k < u.size(); ++k)
        if (int c = cmp_double(u[k], v[k]); c != 0) return c;
      return 0;
    }
    case 2: {
      std::size_t i = a.as_index(), j = b.as_index();
      return i < j ? -1 : (i > j ? 1 : 0);
    }
    case 3: {
      if (int c = compare_points(*a.as_pair().left, *b.as_pair().left))
        return c;
      return compare_points(*a.as_pair().right, *b.as_pair().right);
    }
    case 4: {
      const auto& s = a.as_susp();
      const auto& t = b.as_susp();
      if (int c = cmp_double(s.angle, t.angle); c != 0) return c;
      if ((s.base == nullptr) != (t.base == nullptr))
        return s.base == nullptr ? -1 : 1;
      if (s.base == nullptr) return 0;
      return compare_points(*s.base, *t.base);
    }
  }
  return 0;
}

std::string point_to_string(const Point& p) {
  std::ostringstream os;
  switch (p.rep.index()) {
    case 0:
      os << p.as_scalar();
      break;
    case 1: {
      os << "(";
      const auto& v = p.as_vector();
      for (std::size_t k = 0; k < v.size(); ++k)
        os << (k ? ", " : "") << v[k];
      os << ")";
      break;
    }
    case 2:
      os << "#" << p.as_index();
      break;
    case 3:
      os << "(" << point_to_string(*p.as_pair().left) << ", "
         << point_to_string(*p.as_pair().right) << ")";
      break;
    case 4: {
      const auto& s = p.as_susp();
      if (s.base == nullptr)
        os << (s.angle == 0.0 ? "[pole 0]" : "[pole pi]");
      else
        os << "[" << point_to_string(*s.base) << ", " << s.angle << "]";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Space factories
// ---------------------------------------------------------------------------

namespace {

SpacePtr wrap(SpaceDescriptor d) {
  return std::make_shared<const SpaceDescriptor>(std::move(d));
}

}  // namespace

SpacePtr make_ray() {
  return wrap({RaySpace{}, std::numeric_limits<double>::infinity()});
}

SpacePtr make_interval(double a, double b) {
  if (!(a < b)) throw input_error("interval requires a < b");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw input_error("interval endpoints must be finite");
  return wrap({IntervalSpace{a, b}, b - a});
}

SpacePtr make_euclidean(std::size_t dim) {
  if (dim == 0) throw input_error("euclidean dimension must be >= 1");
  return wrap({EuclideanSpace{dim}, std::numeric_limits<double>::infinity()});
}

SpacePtr make_finite(std::size_t n, std::vector<double> dist) {
  if (n == 0) throw input_error("finite space needs at least one point");
  if (dist.size() != n * n)
    throw input_error("finite space distance matrix has wrong size");
  double diam = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i * n + i] != 0.0)
      throw input_error("finite space diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      double dij = dist[i * n + j];
      if (!std::isfinite(dij) || dij < 0.0)
        throw input_error("finite space distances must be finite and >= 0");
      if (i != j && dij <= 0.0)
        throw input_error("finite space points must be pairwise distinct");
      if (dij != dist[j * n + i])
        throw input_error("finite space distance matrix must be symmetric");
      diam = std::max(diam, dij);
    }
  }
  // Triangle inequality to slack 1e-12, O(n^3).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (dist[i * n + j] > dist[i * n + k] + dist[k * n + j] + 1e-12)
          throw input_error("finite space violates the triangle inequality");
  return wrap({FiniteSpace{n, std::move(dist)}, diam});
}

SpacePtr make_finite_from_line(const std::vector<double>& positions) {
  std::size_t n = positions.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dist[i * n + j] = std::fabs(positions[i] - positions[j]);
  return make_finite(n, std::move(dist));
}

SpacePtr make_qproduct(SpacePtr left, SpacePtr right, double q) {
  if (!left || !right) throw input_error("qproduct factors must be present");
  if (!(q > 1.0)) throw input_error("qproduct requires q > 1");
  double dl = diameter(*left), dr = diameter(*right);
  double diam = std::isinf(dl) || std::isinf(dr)
                    ? std::numeric_limits<double>::infinity()
                    : std::pow(std::pow(dl, q) + std::pow(dr, q), 1.0 / q);
  return wrap(
      {QProductSpace{std::move(left), std::move(right), q}, diam});
}

SpacePtr make_suspension(SpacePtr base, bool strict) {
  if (!base) throw input_error("suspension base must be present");
  double base_diam = diameter(*base);
  bool warn = !(base_diam < kPi / 2);
  if (strict && warn)
    throw input_error(
        "suspension in strict mode requires base diameter < pi/2");
  return wrap({SuspensionSpace{std::move(base), strict, warn}, kPi});
}

const char* SpaceDescriptor::kind() const {
  switch (rep.index()) {
    case 0: return "ray";
    case 1: return "interval";
    case 2: return "euclidean";
    case 3: return "finite";
    case 4: return "qproduct";
    case 5: return "suspension";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Distance
// ---------------------------------------------------------------------------

double distance(const SpaceDescriptor& space, const Point& a, const Point& b) {
  switch (space.rep.index()) {
    case 0:
    case 1:
      return std::fabs(a.as_scalar() - b.as_scalar());
    case 2: {
      const auto& u = a.as_vector();
      const auto& v = b.as_vector();
      double s = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        double d = u[k] - v[k];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case 3:
      return space.as_finite().d(a.as_index(), b.as_index());
    case 4: {
      const auto& qp = space.as_qproduct();
      double dl = distance(*qp.left, *a.as_pair().left, *b.as_pair().left);
      double dr = distance(*qp.right, *a.as_pair().right, *b.as_pair().right);
      if (qp.q == 2.0) return std::hypot(dl, dr);
      return std::pow(std::pow(dl, qp.q) + std::pow(dr, qp.q), 1.0 / qp.q);
    }
    case 5: {
      const auto& sp = space.as_suspension();
      const auto& s = a.as_susp();
      const auto& t = b.as_susp();
      // A pole pins the meridian term, and two points over the same base
      // point share a meridian outright: both cases are plain latitude
      // differences. Taking them literally keeps d(x, x) exactly zero
      // instead of acos-near-one noise.
      if (s.base == nullptr || t.base == nullptr)
        return std::fabs(s.angle - t.angle);
      double d_base = distance(*sp.base, *s.base, *t.base);
      if (d_base == 0.0) return std::fabs(s.angle - t.angle);
      double c = std::cos(s.angle) * std::cos(t.angle) +
                 std::sin(s.angle) * std::sin(t.angle) * std::cos(d_base);
      return std::acos(clamp_unit(c));
    }
  }
  throw input_error("unknown space kind");
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool contains_point(const SpaceDescriptor& space, const Point& p) {
  switch (space.rep.index()) {
    case 0:
      return p.is_scalar() && std::isfinite(p.as_scalar()) &&
             p.as_scalar() >= 0.0;
    case 1: {
      if (!p.is_scalar() || !std::isfinite(p.as_scalar())) return false;
      const auto& iv = space.as_interval();
      return p.as_scalar() >= iv.a && p.as_scalar() <= iv.b;
    }
    case 2: {
      if (!p.is_vector()) return false;
      const auto& v = p.as_vector();
      if (v.size() != space.as_euclidean().dim) return false;
      return std::all_of(v.begin(), v.end(),
                         [](double x) { return std::isfinite(x); });
    }
    case 3:
      return p.is_index() && p.as_index() < space.as_finite().n;
    case 4: {
      if (!p.is_pair()) return false;
      const auto& qp = space.as_qproduct();
      return contains_point(*qp.left, *p.as_pair().left) &&
             contains_point(*qp.right, *p.as_pair().right);
    }
    case 5: {
      if (!p.is_susp()) return false;
      const auto& s = p.as_susp();
      if (s.base == nullptr) return s.angle == 0.0 || s.angle == kPi;
      return s.angle > 0.0 && s.angle < kPi &&
             contains_point(*space.as_suspension().base, *s.base);
    }
  }
  return false;
}

void validate_point(const SpaceDescriptor& space, const Point& p) {
  if (!contains_point(space, p))
    throw input_error(std::string("point ") + point_to_string(p) +
                      " does not belong to the " + space.kind() + " space");
}

double diameter(const SpaceDescriptor& space) {
  if (space.diameter_cache) return *space.diameter_cache;
  return std::numeric_limits<double>::infinity();
}

bool spaces_equal(const SpaceDescriptor& a, const SpaceDescriptor& b) {
  if (a.rep.index() != b.rep.index()) return false;
  switch (a.rep.index()) {
    case 0:
      return true;
    case 1:
      return a.as_interval().a == b.as_interval().a &&
             a.as_interval().b == b.as_interval().b;
    case 2:
      return a.as_euclidean().dim == b.as_euclidean().dim;
    case 3:
      return a.as_finite().n == b.as_finite().n &&
             a.as_finite().dist == b.as_finite().dist;
    case 4:
      return a.as_qproduct().q == b.as_qproduct().q &&
             spaces_equal(*a.as_qproduct().left, *b.as_qproduct().left) &&
             spaces_equal(*a.as_qproduct().right, *b.as_qproduct().right);
    case 5:
      return spaces_equal(*a.as_suspension().base, *b.as_suspension().base);
  }
  return false;
}

}  // namespace otlab
