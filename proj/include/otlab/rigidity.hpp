#pragma once

// The constructions behind the rigidity experiments: the ray's geodesic
// shadow Sigma and its unit-distance slice Sigma_1, the two-atom chart on
// the line with its closed-form W_2, barycenters and Frechet functionals
// on q-products, the barycenter-twisting isometry of P_2(H x Y), the
// cylinder branching counterexample, and the suspension midpoint splittings.

#include <array>
#include <functional>
#include <optional>

#include "otlab/interpolate.hpp"

namespace otlab {

// ---------------------------------------------------------------------------
// Ray families
// ---------------------------------------------------------------------------

// mu_x = (1 - x^-p) delta_0 + x^-p delta_x for x >= 1 (mu_1 = delta_1).
AtomicMeasure sigma1_measure(const SpacePtr& ray, double x, double p);

// W_p(mu_x, mu_y)^p = (1 - x^p/y^p) + (1 - x/y)^p for 1 <= x <= y.
double sigma_distance(double x, double y, double p);

// W_p(delta_1, mu_x)^p = (1 - x^-p) + (1 - 1/x)^p for x >= 1.
double sigma_distance_to_dirac1(double x, double p);

// ---------------------------------------------------------------------------
// Two-atom chart on the line
// ---------------------------------------------------------------------------

// Chart coordinates (x, sigma, r): mean x, standard deviation sigma > 0,
// asymmetry r. The associated measure places mass e^-r / (e^-r + e^r) at
// x - sigma e^r and mass e^r / (e^-r + e^r) at x + sigma e^-r.
struct Delta2Chart {
  double x;
  double sigma;
  double r;
};

// The chart measures on a shared interval hull wide enough for both.
struct Delta2Pair {
  SpacePtr line;
  AtomicMeasure first;
  AtomicMeasure second;
};

Delta2Pair delta2_pair(const Delta2Chart& c1, const Delta2Chart& c2);

// W_2^2 in chart coordinates:
//   |x - y|^2 + sigma^2 + rho^2 - 2 sigma rho e^{-|r - s|}.
// The exponent sign matters: the e^{+|r - s|} variant (kept below for the
// verification report) produces negative squared distances and disagrees
// with the solver; the decaying exponent is the LP-verified form.
double delta2_squared_distance(const Delta2Chart& c1, const Delta2Chart& c2);
double delta2_squared_distance_sign_variant(const Delta2Chart& c1,
                                            const Delta2Chart& c2);

// ---------------------------------------------------------------------------
// Barycenters and Frechet functionals
// ---------------------------------------------------------------------------

// Weighted mean of a Euclidean measure.
Point barycenter(const AtomicMeasure& mu_euclidean);

// F_mu(x) = sum_k w_k d(x, x_k)^2 on any space.
double frechet_function(const AtomicMeasure& mu, const Point& x);

// Candidates attaining the minimum of F_mu over the list within tol.
std::vector<Point> frechet_mean_set(const AtomicMeasure& mu,
                                    const std::vector<Point>& candidates,
                                    double tol = 1e-12);

// ---------------------------------------------------------------------------
// Isometry candidates
// ---------------------------------------------------------------------------

// A self-map of a measure space given at atom level. The forward map may
// consult the whole measure (the exotic map moves atoms through the
// measure's own Euclidean barycenter, so it is not pointwise).
struct IsometryCandidate {
  SpacePtr space;
  std::function<Point(const AtomicMeasure&, const Point&)> forward;
  bool claimed_isometry;

  AtomicMeasure apply(const AtomicMeasure& mu) const;
};

// Barycenter-twisting isometry of P_2 over a 2-product Euclidean x Y:
// recenter the Euclidean coordinates at the barycenter b of the Euclidean
// marginal, apply the orthogonal map psi there, and put the atoms back:
// (h, y) -> (b + psi (h - b), y). Fixes every Dirac, preserves W_2, and
// is not induced by any isometry of the underlying product.
// psi must satisfy ||psi^T psi - I||_inf <= 1e-12.
IsometryCandidate exotic_isometry(SpacePtr qproduct_space,
                                  std::vector<std::vector<double>> psi);

// Max |W_p(Phi mu, Phi nu) - W_p(mu, nu)| over the sampled pairs.
double verify_isometry(const IsometryCandidate& phi,
                       const std::vector<std::pair<AtomicMeasure,
                                                   AtomicMeasure>>& pairs,
                       double p);

// ---------------------------------------------------------------------------
// Cylinder branching
// ---------------------------------------------------------------------------

// I(nu) = { mu : (T_0)_# mu = nu } for nu supported on the base fiber of a
// cylinder. Exact push-forward equality up to atom dedup tolerance.
bool cylinder_I_membership(const AtomicMeasure& mu, const AtomicMeasure& nu);

// Lifts a base measure with >= 2 atoms to the fiber-0 slice of the
// cylinder base x_q [0, inf), splits the support into balls of radius
// D/4 around a diameter-realizing atom pair (x, y) plus the remainder C,
// and raises the pieces to heights 2D / 4D:
//   nu_0 = T_{2D}# mu|B_x + T_{4D}# mu|C + mu|B_y,
//   nu_1 = mu|B_x + T_{4D}# mu|C + T_{2D}# mu|B_y.
// Both lie in I(mu), but the optimal plan between them swaps the ball
// masses sideways, so midpoints leave I(mu): the base push-forward of the
// midpoint moves the swapped mass to fresh base points.
struct CylinderBranchingReport {
  SpacePtr cylinder;
  double diameter;             // D = diam(supp mu)
  double ball_mass_x;
  double ball_mass_y;
  AtomicMeasure nu0;
  AtomicMeasure nu1;
  TransportPlan plan;          // optimal plan nu0 -> nu1
  double crossing_cost;        // = plan cost
  double vertical_cost;        // cost of the height-swapping diagonal plan
  std::optional<AtomicMeasure> midpoint;  // absent when the base has no
                                          // midpoints (finite models)
  std::optional<double> base_tv_gap;      // TV(T_0# midpoint, mu)
  std::optional<bool> midpoint_left_I;
};

CylinderBranchingReport cylinder_branching_experiment(
    const SpacePtr& base, const AtomicMeasure& base_mu, double q, double p);

// ---------------------------------------------------------------------------
// Suspension midpoints and projections
// ---------------------------------------------------------------------------

// For a non-Dirac equator measure nu, splits the support into separated
// balls E (around the lowest-index atom) and F, sets lambda = nu(F), and
// returns two distinct midpoints of (nu, (1-lambda) delta_0 + lambda
// delta_pi):
//   m1 = (1-lambda) L_{1/2}# (nu|E / nu(E)) + lambda L_{3/2}# (nu|F / nu(F))
//   m2 = (1-lambda) L_{1/2}# nu + lambda L_{3/2}# nu.
// They differ in mass on the half-latitude slice over E: (1-lambda) vs
// (1-lambda)^2.
// A Dirac input throws dirac_midpoint_unique carrying the unique midpoint
// (1-lambda) delta_{[x, pi/4]} + lambda delta_{[x, 3pi/4]} for the lambda
// hint (default 1/2).
struct TwoMidpointsResult {
  AtomicMeasure m1;
  AtomicMeasure m2;
  double lambda;
  AtomicMeasure pole_measure;  // (1-lambda) delta_0 + lambda delta_pi
};

struct dirac_midpoint_unique : std::runtime_error {
  dirac_midpoint_unique(std::string msg, AtomicMeasure mid);
  std::shared_ptr<const AtomicMeasure> unique_midpoint;
};

TwoMidpointsResult suspension_two_midpoints(
    const AtomicMeasure& nu_equator,
    std::optional<double> dirac_lambda_hint = std::nullopt);

// Push-forward of mu through the meridian projection onto the half great
// circle over base point y. Preserves the mass of any atom already on
// that meridian.
AtomicMeasure meridian_projection_pushforward(const AtomicMeasure& mu,
                                              const Point& y);

// ---------------------------------------------------------------------------
// W_1 midpoint-diameter witness on the ray
// ---------------------------------------------------------------------------

// For eta = (1-lambda) delta_0 + lambda delta_x in Sigma \ {delta_0} and a
// stretch factor n >= 2, certifies the family mu_n = (1-lambda) delta_0 +
// lambda delta_{x n} against eta' = (1-lambda/n) delta_0 + (lambda/n)
// delta_{x n}:
//   (1) W_1(delta_0, mu_n) = lambda x n (diverges with n),
//   (2) delta_0 and mu_n are adjacent,
//   (3) eta is a 1/n-intermediate point of (delta_0, mu_n),
//   (4) W_1(eta, eta') equals the level-1/n diameter bound of the family
//       scan, so the intermediate set spreads out as n grows.
struct SigmaWitnessReport {
  double w1_endpoints;      // W_1(delta_0, mu_n)
  bool adjacent;
  bool eta_intermediate;
  double w1_eta_pair;       // W_1(eta, eta')
  double diameter_bound;    // family scan at level 1/n
  AtomicMeasure mu_n;
  AtomicMeasure eta_prime;
  bool all_pass;
};

SigmaWitnessReport sigma_w1_claim_witness(const AtomicMeasure& eta,
                                          std::size_t n);

}  // namespace otlab
