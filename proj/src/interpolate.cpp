#include "otlab/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace otlab {

namespace {

// Plan masses can carry ~1e-11 of filtered perturbation, so measures built
// from them use a looser sum tolerance than hand-assembled atom lists.
constexpr double kPlanMassTol = 1e-9;

// One merged quantile segment: mass and the two endpoint values.
struct Segment {
  double mass;
  double vmu;
  double vnu;
};

std::vector<Segment> merged_segments(const QuantileFunction& qmu,
                                     const QuantileFunction& qnu) {
  std::vector<Segment> segs;
  double prev = 0.0;
  std::size_t i = 0, j = 0;
  while (prev < 1.0) {
    double next = std::min(qmu.cum[i], qnu.cum[j]);
    if (next > prev) segs.push_back({next - prev, qmu.value[i], qnu.value[j]});
    if (qmu.cum[i] == next && i + 1 < qmu.cum.size()) ++i;
    if (qnu.cum[j] == next && j + 1 < qnu.cum.size()) ++j;
    if (next == prev && qmu.cum[i] <= prev && qnu.cum[j] <= prev) break;
    prev = next;
  }
  return segs;
}

// Pointwise quantile blend (1-t) G_mu^{-1} + t G_nu^{-1}, realized as a
// measure. This is the displacement interpolant of the monotone coupling.
AtomicMeasure quantile_blend(const AtomicMeasure& mu, const AtomicMeasure& nu,
                             double t) {
  std::vector<Segment> segs = merged_segments(to_quantile(mu), to_quantile(nu));
  std::vector<Atom> atoms;
  atoms.reserve(segs.size());
  for (const auto& s : segs)
    atoms.push_back(
        {Point::scalar((1.0 - t) * s.vmu + t * s.vnu), s.mass});
  return AtomicMeasure::make(mu.space(), std::move(atoms), kPlanMassTol);
}

}  // namespace

// ---------------------------------------------------------------------------
// Displacement paths
// ---------------------------------------------------------------------------

AtomicMeasure WassersteinPath::at(double t) const {
  if (!(t >= t_min && t <= t_max))
    throw input_error("path parameter " + std::to_string(t) +
                      " lies outside [" + std::to_string(t_min) + ", " +
                      std::to_string(t_max) + "]");
  std::vector<Atom> atoms;
  atoms.reserve(segments.size());
  for (std::size_t k = 0; k < segments.size(); ++k)
    atoms.push_back({segments[k].eval(t), plan.entries()[k].mass});
  return AtomicMeasure::make(space, std::move(atoms), kPlanMassTol);
}

WassersteinPath displacement_path(const TransportPlan& plan) {
  SpacePtr space = plan.source().space();
  std::vector<GeodesicPath> segments;
  segments.reserve(plan.entries().size());
  for (const auto& e : plan.entries())
    segments.push_back(geodesic(space, plan.source().atoms()[e.i].point,
                                plan.target().atoms()[e.j].point));
  return WassersteinPath{space, plan, std::move(segments), 0.0, 1.0};
}

AtomicMeasure displacement_interpolate(const TransportPlan& plan, double t) {
  return displacement_path(plan).at(t);
}

// ---------------------------------------------------------------------------
// Midpoint verification
// ---------------------------------------------------------------------------

bool verify_intermediate(const AtomicMeasure& mu, const AtomicMeasure& nu,
                         const AtomicMeasure& m, double t, double p,
                         double tol) {
  if (!(t >= 0.0 && t <= 1.0))
    throw input_error("intermediate level must lie in [0, 1]");
  double W = solve_wp(mu, nu, p).wp();
  double a = solve_wp(mu, m, p).wp();
  double b = solve_wp(m, nu, p).wp();
  double scale = tol * (1.0 + W);
  return std::fabs(a - t * W) <= scale && std::fabs(b - (1.0 - t) * W) <= scale;
}

bool verify_midpoint(const AtomicMeasure& mu, const AtomicMeasure& nu,
                     const AtomicMeasure& mid, double p, double tol) {
  return verify_intermediate(mu, nu, mid, 0.5, p, tol);
}

// ---------------------------------------------------------------------------
// Midpoint-set diameter (W_1, one-dimensional)
// ---------------------------------------------------------------------------

double intermediate_diameter_1d(const AtomicMeasure& mu,
                                const AtomicMeasure& nu, double level,
                                std::size_t samples) {
  if (!(level >= 0.0 && level <= 1.0))
    throw input_error("intermediate level must lie in [0, 1]");
  if (!mu.space()->is_one_dimensional())
    throw input_error("the diameter scan needs a ray or interval space");
  if (level == 0.0 || level == 1.0) return 0.0;  // endpoint sets are singletons

  // Two extreme t-intermediates: the monotone displacement interpolant and
  // the mass mixture (1-t) mu + t nu. The mixture is always a W_1
  // intermediate: both triangle legs are convexity upper bounds that sum
  // to W_1, forcing equality. Convex blends of intermediates remain
  // intermediates, filling the family out between the extremes.
  std::vector<AtomicMeasure> candidates;
  candidates.push_back(quantile_blend(mu, nu, level));
  candidates.push_back(mixture({{1.0 - level, mu}, {level, nu}}));
  for (std::size_t s = 1; s <= samples; ++s) {
    double alpha =
        static_cast<double>(s) / (static_cast<double>(samples) + 1.0);
    candidates.push_back(
        mixture({{1.0 - alpha, candidates[0]}, {alpha, candidates[1]}}));
  }

  std::vector<AtomicMeasure> verified;
  for (const auto& c : candidates)
    if (verify_intermediate(mu, nu, c, level, 1.0)) verified.push_back(c);

  double diam = 0.0;
  for (std::size_t a = 0; a < verified.size(); ++a)
    for (std::size_t b = a + 1; b < verified.size(); ++b)
      diam = std::max(diam, wp_1d(verified[a], verified[b], 1.0));
  return diam;
}

double midpoint_diameter_1d(const AtomicMeasure& mu, const AtomicMeasure& nu,
                            std::size_t samples) {
  return intermediate_diameter_1d(mu, nu, 0.5, samples);
}

// ---------------------------------------------------------------------------
// The two-atom family and its complement
// ---------------------------------------------------------------------------

bool sigma_member(const AtomicMeasure& mu) {
  if (!mu.space()->is_ray())
    throw input_error("the two-atom family lives on the ray");
  if (mu.size() == 1) return true;
  if (mu.size() != 2) return false;
  // Atoms are sorted, so a zero atom sits first; exact zero only.
  return mu.atoms()[0].point.as_scalar() == 0.0;
}

WassersteinPath sigma_ray_witness(const AtomicMeasure& mu, double m1) {
  if (sigma_member(mu))
    throw input_error(
        "two-atom measures anchored at zero emanate no maximal ray");
  if (!(m1 > 0.0 && m1 < 1.0))
    throw input_error("the split level must lie strictly inside (0, 1)");

  QuantileFunction qf = to_quantile(mu);
  const double v1 = qf(m1);
  if (!(v1 > 0.0))
    throw input_error("the split level must sit above quantile value 0");

  // Freeze the quantile on (0, m1]; on (m1, 1) slide from the constant v1
  // at t = 0 to G^{-1} at t = 1 and keep going. Affine in t pointwise, so
  // every pair of path points is coupled monotonically.
  struct RaySeg {
    double mass;
    double v0;      // value at t = 0
    double target;  // value at t = 1 (an atom of mu)
  };
  std::vector<RaySeg> segs;
  double prev = 0.0;
  double moving = 0.0;
  for (std::size_t k = 0; k < qf.cum.size(); ++k) {
    double lo = prev, hi = qf.cum[k];
    prev = hi;
    if (hi <= m1) {
      segs.push_back({hi - lo, qf.value[k], qf.value[k]});
    } else if (lo >= m1) {
      segs.push_back({hi - lo, v1, qf.value[k]});
      moving += (hi - lo) * (qf.value[k] - v1);
    } else {
      segs.push_back({m1 - lo, qf.value[k], qf.value[k]});
      segs.push_back({hi - m1, v1, qf.value[k]});
      moving += (hi - m1) * (qf.value[k] - v1);
    }
  }
  if (!(moving > 0.0))
    throw input_error("the split level leaves no moving mass above it");

  // Endpoint measure at t = 0.
  std::vector<Atom> start_atoms;
  start_atoms.reserve(segs.size());
  for (const auto& s : segs)
    start_atoms.push_back({Point::scalar(s.v0), s.mass});
  AtomicMeasure mu0 =
      AtomicMeasure::make(mu.space(), std::move(start_atoms), kPlanMassTol);

  auto atom_index = [](const AtomicMeasure& nu, double value) {
    for (std::size_t k = 0; k < nu.size(); ++k)
      if (points_equal(nu.atoms()[k].point, Point::scalar(value))) return k;
    throw not_computable("ray witness lost an atom during merging");
  };

  std::map<std::pair<std::size_t, std::size_t>, double> merged;
  for (const auto& s : segs)
    merged[{atom_index(mu0, s.v0), atom_index(mu, s.target)}] += s.mass;

  std::vector<PlanEntry> entries;
  entries.reserve(merged.size());
  for (const auto& [key, mass] : merged)
    entries.push_back({key.first, key.second, mass});
  TransportPlan plan = TransportPlan::make(mu0, mu, std::move(entries), 1.0);

  std::vector<GeodesicPath> segments;
  segments.reserve(plan.entries().size());
  for (const auto& e : plan.entries()) {
    const Point& x = plan.source().atoms()[e.i].point;
    const Point& y = plan.target().atoms()[e.j].point;
    // target >= v0 >= 0 on every segment, so the forward extension stays
    // on the ray for all t >= 0.
    segments.push_back(GeodesicPath{mu.space(), x, y,
                                    distance(*mu.space(), x, y),
                                    LinearSegment{}});
  }
  return WassersteinPath{mu.space(), std::move(plan), std::move(segments), 0.0,
                         std::numeric_limits<double>::infinity()};
}

}  // namespace otlab
