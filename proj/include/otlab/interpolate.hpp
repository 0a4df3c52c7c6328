#pragma once

// Displacement interpolation along transport plans, midpoint verification,
// and the ray-specific constructions: the maximal-ray witness and the
// midpoint-set diameter scan for W_1.

#include <optional>

#include "otlab/geodesic.hpp"
#include "otlab/transport.hpp"

namespace otlab {

// A displacement path t -> sum_k mass_k delta_{gamma_k(t)} built from a
// plan and one geodesic segment per entry. The domain may extend past
// [0, 1] (ray witness paths live on [0, inf)). Evaluation never re-solves
// the plan.
struct WassersteinPath {
  SpacePtr space;
  TransportPlan plan;
  std::vector<GeodesicPath> segments;  // one per plan entry
  double t_min;
  double t_max;  // may be +inf

  AtomicMeasure at(double t) const;
};

// Builds the per-entry geodesic list. Throws not_computable when a support
// pair admits no representable geodesic.
WassersteinPath displacement_path(const TransportPlan& plan);

// Single evaluation mu_t = (e_t)_# of the plan's displacement; for finite
// factors each entry falls back to the intermediate-point scan at t.
AtomicMeasure displacement_interpolate(const TransportPlan& plan, double t);

// W_p(mu, m) = W_p(mu, nu)/2 = W_p(m, nu) within tol.
bool verify_midpoint(const AtomicMeasure& mu, const AtomicMeasure& nu,
                     const AtomicMeasure& mid, double p, double tol = 1e-9);

// General level: W_p(mu, m) = t W, W_p(m, nu) = (1 - t) W within tol.
bool verify_intermediate(const AtomicMeasure& mu, const AtomicMeasure& nu,
                         const AtomicMeasure& m, double t, double p,
                         double tol = 1e-9);

// Lower bound on diam M^t(mu, nu) in W_1 over a structured family of
// verified t-intermediate points: the quantile interpolant, the mass
// mixture (1-t) mu + t nu (always a W_1 intermediate), and convex blends
// of the two at `samples` interior parameters. Every candidate is checked
// by verify_intermediate before it can contribute. For adjacent pairs the
// bound equals 2 t (1-t) W_1 (= W_1/2 at the midpoint level) exactly; for
// non-adjacent pairs it is strictly smaller.
double intermediate_diameter_1d(const AtomicMeasure& mu,
                                const AtomicMeasure& nu, double level,
                                std::size_t samples = 9);

double midpoint_diameter_1d(const AtomicMeasure& mu, const AtomicMeasure& nu,
                            std::size_t samples = 9);

// Membership in Sigma = { (1-lambda) delta_0 + lambda delta_x } on the ray
// (atom at 0 detected by exact zero equality, not proximity).
bool sigma_member(const AtomicMeasure& mu);

// For mu outside Sigma and a mass level m1 with 0 < G^{-1}(m1) and a
// strictly larger quantile value beyond m1, builds the constant-speed ray
//   G_{mu_t}^{-1} = G_mu^{-1} on (0, m1],
//                   (1-t) G_mu^{-1}(m1) + t G_mu^{-1} on (m1, 1),
// whose t = 0 endpoint is not delta_0 and whose t = 1 point is mu. The
// quantile is affine in t pointwise, so the path is geodesic in every W_p
// at once. Domain [0, inf). Throws input_error when mu lies in Sigma (such
// measures emanate no admissible ray) or when m1 is not a valid split
// level.
WassersteinPath sigma_ray_witness(const AtomicMeasure& mu, double m1);

}  // namespace otlab
