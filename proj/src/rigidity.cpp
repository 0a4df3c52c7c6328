#include "otlab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace otlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pow_p(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  if (p == 3.0) return d * d * d;
  return std::pow(d, p);
}

double root_p(double c, double p) {
  if (p == 1.0) return c;
  if (p == 2.0) return std::sqrt(c);
  return std::pow(c, 1.0 / p);
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw input_error("exponent p must be finite and >= 1");
}

}  // namespace

// ---------------------------------------------------------------------------
// Ray families
// ---------------------------------------------------------------------------

AtomicMeasure sigma1_measure(const SpacePtr& ray, double x, double p) {
  check_p(p);
  if (!ray->is_ray())
    throw input_error("the unit-distance family lives on the ray");
  if (!(x >= 1.0) || !std::isfinite(x))
    throw input_error("the family parameter needs x >= 1");
  if (x == 1.0) return AtomicMeasure::dirac(ray, Point::scalar(1.0));
  double w = std::pow(x, -p);
  return AtomicMeasure::make(
      ray, {{Point::scalar(0.0), 1.0 - w}, {Point::scalar(x), w}});
}

double sigma_distance(double x, double y, double p) {
  check_p(p);
  if (!(1.0 <= x && x <= y))
    throw input_error("closed-form distance needs 1 <= x <= y");
  if (x == y) return 0.0;
  double ratio_mass = 1.0 - std::pow(x, p) / std::pow(y, p);
  double shift = std::pow(1.0 - x / y, p);
  return root_p(ratio_mass + shift, p);
}

double sigma_distance_to_dirac1(double x, double p) {
  check_p(p);
  if (!(x >= 1.0)) throw input_error("closed-form distance needs x >= 1");
  if (x == 1.0) return 0.0;
  return root_p((1.0 - std::pow(x, -p)) + std::pow(1.0 - 1.0 / x, p), p);
}

// ---------------------------------------------------------------------------
// Two-atom chart on the line
// ---------------------------------------------------------------------------

namespace {

void check_chart(const Delta2Chart& c) {
  if (!std::isfinite(c.x) || !std::isfinite(c.sigma) || !std::isfinite(c.r))
    throw input_error("chart coordinates must be finite");
  if (!(c.sigma > 0.0))
    throw input_error("chart standard deviation must be positive");
}

// The two chart atoms: mass 1/(1+e^{2r}) at x - sigma e^r and mass
// 1/(1+e^{-2r}) at x + sigma e^{-r} (mean x, variance sigma^2).
std::pair<Atom, Atom> chart_atoms(const Delta2Chart& c) {
  double left = c.x - c.sigma * std::exp(c.r);
  double right = c.x + c.sigma * std::exp(-c.r);
  double w_left = 1.0 / (1.0 + std::exp(2.0 * c.r));
  double w_right = 1.0 / (1.0 + std::exp(-2.0 * c.r));
  return {Atom{Point::scalar(left), w_left}, Atom{Point::scalar(right), w_right}};
}

}  // namespace

Delta2Pair delta2_pair(const Delta2Chart& c1, const Delta2Chart& c2) {
  check_chart(c1);
  check_chart(c2);
  auto [a1, b1] = chart_atoms(c1);
  auto [a2, b2] = chart_atoms(c2);
  double lo = std::min(a1.point.as_scalar(), a2.point.as_scalar()) - 1.0;
  double hi = std::max(b1.point.as_scalar(), b2.point.as_scalar()) + 1.0;
  SpacePtr line = make_interval(lo, hi);
  AtomicMeasure first = AtomicMeasure::make(line, {a1, b1});
  AtomicMeasure second = AtomicMeasure::make(line, {a2, b2});
  return {std::move(line), std::move(first), std::move(second)};
}

double delta2_squared_distance(const Delta2Chart& c1, const Delta2Chart& c2) {
  check_chart(c1);
  check_chart(c2);
  double dx = c1.x - c2.x;
  return dx * dx + c1.sigma * c1.sigma + c2.sigma * c2.sigma -
         2.0 * c1.sigma * c2.sigma * std::exp(-std::fabs(c1.r - c2.r));
}

double delta2_squared_distance_sign_variant(const Delta2Chart& c1,
                                            const Delta2Chart& c2) {
  check_chart(c1);
  check_chart(c2);
  double dx = c1.x - c2.x;
  return dx * dx + c1.sigma * c1.sigma + c2.sigma * c2.sigma -
         2.0 * c1.sigma * c2.sigma * std::exp(std::fabs(c1.r - c2.r));
}

// ---------------------------------------------------------------------------
// Barycenters and Frechet functionals
// ---------------------------------------------------------------------------

Point barycenter(const AtomicMeasure& mu_euclidean) {
  if (!mu_euclidean.space()->is_euclidean())
    throw input_error("barycenters are computed for Euclidean measures");
  std::size_t dim = mu_euclidean.space()->as_euclidean().dim;
  std::vector<double> b(dim, 0.0);
  for (const auto& atom : mu_euclidean.atoms()) {
    const auto& v = atom.point.as_vector();
    for (std::size_t k = 0; k < dim; ++k) b[k] += atom.weight * v[k];
  }
  return Point::vec(std::move(b));
}

double frechet_function(const AtomicMeasure& mu, const Point& x) {
  validate_point(*mu.space(), x);
  double f = 0.0;
  for (const auto& atom : mu.atoms()) {
    double d = distance(*mu.space(), x, atom.point);
    f += atom.weight * d * d;
  }
  return f;
}

std::vector<Point> frechet_mean_set(const AtomicMeasure& mu,
                                    const std::vector<Point>& candidates,
                                    double tol) {
  if (candidates.empty()) return {};
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const auto& c : candidates) values.push_back(frechet_function(mu, c));
  double best = *std::min_element(values.begin(), values.end());
  std::vector<Point> argmin;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (values[k] <= best + tol) argmin.push_back(candidates[k]);
  return argmin;
}

// ---------------------------------------------------------------------------
// Isometry candidates
// ---------------------------------------------------------------------------

AtomicMeasure IsometryCandidate::apply(const AtomicMeasure& mu) const {
  if (!spaces_equal(*mu.space(), *space))
    throw input_error("isometry candidate applied outside its space");
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const auto& atom : mu.atoms())
    atoms.push_back({forward(mu, atom.point), atom.weight});
  return AtomicMeasure::make(mu.space(), std::move(atoms), 1e-9);
}

IsometryCandidate exotic_isometry(SpacePtr qproduct_space,
                                  std::vector<std::vector<double>> psi) {
  if (!qproduct_space->is_qproduct())
    throw input_error("the barycenter-twisting map needs a q-product space");
  const auto& qp = qproduct_space->as_qproduct();
  if (qp.q != 2.0)
    throw input_error(
        "the barycenter-twisting map preserves W_2 only for the 2-product");
  if (!qp.left->is_euclidean())
    throw input_error(
        "the barycenter-twisting map needs a Euclidean left factor");
  const std::size_t dim = qp.left->as_euclidean().dim;
  if (psi.size() != dim)
    throw input_error("orthogonal matrix dimension does not match the factor");
  for (const auto& row : psi)
    if (row.size() != dim)
      throw input_error("orthogonal matrix must be square");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += psi[k][i] * psi[k][j];
      double target = (i == j) ? 1.0 : 0.0;
      if (std::fabs(dot - target) > 1e-12)
        throw input_error("matrix is not orthogonal within 1e-12");
    }

  auto forward = [psi = std::move(psi), dim](const AtomicMeasure& mu,
                                             const Point& pt) {
    Point b = barycenter(marginals(mu).first);
    const auto& bv = b.as_vector();
    const auto& pair = pt.as_pair();
    const auto& h = pair.left->as_vector();
    std::vector<double> image(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = bv[i];
      for (std::size_t j = 0; j < dim; ++j) acc += psi[i][j] * (h[j] - bv[j]);
      image[i] = acc;
    }
    return Point::pair(Point::vec(std::move(image)), *pair.right);
  };
  return IsometryCandidate{std::move(qproduct_space), std::move(forward), true};
}

double verify_isometry(
    const IsometryCandidate& phi,
    const std::vector<std::pair<AtomicMeasure, AtomicMeasure>>& pairs,
    double p) {
  check_p(p);
  double worst = 0.0;
  for (const auto& [mu, nu] : pairs) {
    double before = solve_wp(mu, nu, p).wp();
    double after = solve_wp(phi.apply(mu), phi.apply(nu), p).wp();
    worst = std::max(worst, std::fabs(after - before));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Cylinder branching
// ---------------------------------------------------------------------------

namespace {

double cylinder_height(const Point& pt) { return pt.as_pair().right->as_scalar(); }

void check_cylinder(const SpaceDescriptor& space) {
  if (!space.is_qproduct() || !space.as_qproduct().right->is_one_dimensional())
    throw input_error("expected a cylinder (q-product with height factor)");
}

}  // namespace

bool cylinder_I_membership(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  check_cylinder(*mu.space());
  if (!spaces_equal(*mu.space(), *nu.space()))
    throw input_error("membership compares measures on one cylinder");
  for (const auto& atom : nu.atoms())
    if (std::fabs(cylinder_height(atom.point)) > 1e-12)
      throw input_error("the reference measure must sit on the base fiber");
  AtomicMeasure projected = push_forward(
      mu,
      [&](const Point& pt) {
        return fiber_projection(*mu.space(), 0.0, pt);
      },
      mu.space());
  return measures_equal(projected, nu);
}

CylinderBranchingReport cylinder_branching_experiment(
    const SpacePtr& base, const AtomicMeasure& base_mu, double q, double p) {
  check_p(p);
  if (!spaces_equal(*base, *base_mu.space()))
    throw input_error("the base measure must live on the base space");
  if (base_mu.size() < 2)
    throw input_error("branching needs a base support with at least 2 atoms");

  SpacePtr cylinder = make_qproduct(base, make_ray(), q);
  auto lift = [&](const Point& x, double h) {
    return Point::pair(x, Point::scalar(h));
  };

  // Diameter-realizing pair of support atoms, lowest indices on ties.
  const auto& atoms = base_mu.atoms();
  double D = -1.0;
  std::size_t ix = 0, iy = 1;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      double d = distance(*base, atoms[i].point, atoms[j].point);
      if (d > D) {
        D = d;
        ix = i;
        iy = j;
      }
    }
  const double eps = D / 4.0;

  // Split the support into the two balls and the remainder, then raise the
  // pieces to heights 2D / 4D in opposite patterns.
  std::vector<Atom> lifted, n0_atoms, n1_atoms;
  double mass_x = 0.0, mass_y = 0.0;
  for (const auto& atom : atoms) {
    lifted.push_back({lift(atom.point, 0.0), atom.weight});
    double dx = distance(*base, atom.point, atoms[ix].point);
    double dy = distance(*base, atom.point, atoms[iy].point);
    if (dx <= eps) {
      mass_x += atom.weight;
      n0_atoms.push_back({lift(atom.point, 2.0 * D), atom.weight});
      n1_atoms.push_back({lift(atom.point, 0.0), atom.weight});
    } else if (dy <= eps) {
      mass_y += atom.weight;
      n0_atoms.push_back({lift(atom.point, 0.0), atom.weight});
      n1_atoms.push_back({lift(atom.point, 2.0 * D), atom.weight});
    } else {
      n0_atoms.push_back({lift(atom.point, 4.0 * D), atom.weight});
      n1_atoms.push_back({lift(atom.point, 4.0 * D), atom.weight});
    }
  }
  AtomicMeasure mu = AtomicMeasure::make(cylinder, std::move(lifted));
  AtomicMeasure nu0 = AtomicMeasure::make(cylinder, std::move(n0_atoms));
  AtomicMeasure nu1 = AtomicMeasure::make(cylinder, std::move(n1_atoms));

  TransportPlan plan = solve_wp(nu0, nu1, p);

  // The stay-in-place alternative: swap the ball heights vertically.
  double vertical_cost = (mass_x + mass_y) * pow_p(2.0 * D, p);

  std::optional<AtomicMeasure> midpoint;
  try {
    midpoint = displacement_interpolate(plan, 0.5);
  } catch (const not_computable&) {
    // Bases without midpoints (finite models) have no displacement curve.
  }

  std::optional<double> base_tv_gap;
  std::optional<bool> midpoint_left_I;
  if (midpoint) {
    AtomicMeasure projected = push_forward(
        *midpoint,
        [&](const Point& pt) {
          return fiber_projection(*cylinder, 0.0, pt);
        },
        cylinder);
    base_tv_gap = tv_distance(projected, mu);
    midpoint_left_I = !cylinder_I_membership(*midpoint, mu);
  }

  const double crossing_cost = plan.cost();
  return {std::move(cylinder), D,        mass_x,
          mass_y,              std::move(nu0), std::move(nu1),
          std::move(plan),     crossing_cost,  vertical_cost,
          std::move(midpoint), base_tv_gap,    midpoint_left_I};
}

// ---------------------------------------------------------------------------
// Suspension midpoints and projections
// ---------------------------------------------------------------------------

dirac_midpoint_unique::dirac_midpoint_unique(std::string msg, AtomicMeasure mid)
    : std::runtime_error(std::move(msg)),
      unique_midpoint(std::make_shared<AtomicMeasure>(std::move(mid))) {}

TwoMidpointsResult suspension_two_midpoints(
    const AtomicMeasure& nu_equator, std::optional<double> dirac_lambda_hint) {
  const SpacePtr& space = nu_equator.space();
  if (!space->is_suspension())
    throw input_error("midpoint splitting needs a suspension measure");
  for (const auto& atom : nu_equator.atoms()) {
    const auto& s = atom.point.as_susp();
    if (s.base == nullptr || std::fabs(s.angle - kPi / 2.0) > 1e-12)
      throw input_error("the measure must sit on the equator");
  }

  if (nu_equator.is_dirac()) {
    double lambda = dirac_lambda_hint.value_or(0.5);
    if (!(lambda > 0.0 && lambda < 1.0))
      throw input_error("the pole split must lie strictly inside (0, 1)");
    const Point& x = nu_equator.atoms()[0].point;
    const Point base = *x.as_susp().base;
    AtomicMeasure mid = AtomicMeasure::make(
        space, {{Point::susp(kPi / 4.0, base), 1.0 - lambda},
                {Point::susp(3.0 * kPi / 4.0, base), lambda}});
    throw dirac_midpoint_unique(
        "equator Diracs have a single midpoint toward the pole pair",
        std::move(mid));
  }

  // Split the support by base distance from the lowest-index atom: the far
  // cluster F takes everything at least half the maximal distance away.
  const SpacePtr& base_space = space->as_suspension().base;
  const Point base0 = *nu_equator.atoms()[0].point.as_susp().base;
  double far = 0.0;
  for (const auto& atom : nu_equator.atoms())
    far = std::max(far, distance(*base_space, base0,
                                 *atom.point.as_susp().base));
  auto in_near = [&](const Point& pt) {
    return distance(*base_space, base0, *pt.as_susp().base) < far / 2.0;
  };

  auto [nu_e, mass_e] = restrict_normalized(nu_equator, in_near);
  auto [nu_f, mass_f] =
      restrict_normalized(nu_equator, [&](const Point& pt) {
        return !in_near(pt);
      });
  const double lambda = mass_f;

  auto lower = [&](const Point& pt) { return scaling_map(*space, 0.5, pt); };
  auto raise = [&](const Point& pt) { return scaling_map(*space, 1.5, pt); };

  AtomicMeasure m1 = mixture({{1.0 - lambda, push_forward(nu_e, lower, space)},
                              {lambda, push_forward(nu_f, raise, space)}});
  AtomicMeasure m2 =
      mixture({{1.0 - lambda, push_forward(nu_equator, lower, space)},
               {lambda, push_forward(nu_equator, raise, space)}});
  AtomicMeasure poles = AtomicMeasure::make(
      space,
      {{Point::pole_zero(), 1.0 - lambda}, {Point::pole_pi(), lambda}});
  return {std::move(m1), std::move(m2), lambda, std::move(poles)};
}

AtomicMeasure meridian_projection_pushforward(const AtomicMeasure& mu,
                                              const Point& y) {
  return push_forward(
      mu,
      [&](const Point& pt) { return meridian_projection(*mu.space(), y, pt); },
      mu.space());
}

// ---------------------------------------------------------------------------
// W_1 midpoint-diameter witness on the ray
// ---------------------------------------------------------------------------

SigmaWitnessReport sigma_w1_claim_witness(const AtomicMeasure& eta,
                                          std::size_t n) {
  if (!sigma_member(eta))
    throw input_error("the witness starts from a two-atom family member");
  if (n < 2) throw input_error("the stretch factor must be at least 2");

  double lambda = 1.0, x = 0.0;
  if (eta.size() == 1) {
    x = eta.atoms()[0].point.as_scalar();
  } else {
    lambda = eta.atoms()[1].weight;
    x = eta.atoms()[1].point.as_scalar();
  }
  if (!(x > 0.0))
    throw input_error("the witness needs a family member away from delta_0");

  const SpacePtr& ray = eta.space();
  const double nd = static_cast<double>(n);
  const double t = 1.0 / nd;

  auto two_atom = [&](double mass_far, double far_value) {
    if (mass_far >= 1.0)
      return AtomicMeasure::dirac(ray, Point::scalar(far_value));
    return AtomicMeasure::make(ray,
                               {{Point::scalar(0.0), 1.0 - mass_far},
                                {Point::scalar(far_value), mass_far}});
  };
  AtomicMeasure delta0 = AtomicMeasure::dirac(ray, Point::scalar(0.0));
  AtomicMeasure mu_n = two_atom(lambda, x * nd);
  AtomicMeasure eta_prime = two_atom(lambda / nd, x * nd);

  double w1_endpoints = wp_1d(delta0, mu_n, 1.0);
  bool adjacent = adjacency_test(delta0, mu_n);
  bool eta_intermediate = verify_intermediate(delta0, mu_n, eta, t, 1.0);
  double w1_eta_pair = wp_1d(eta, eta_prime, 1.0);
  double diameter_bound = intermediate_diameter_1d(delta0, mu_n, t);

  // eta and eta' are exactly the two extremes of the diameter scan, and
  // for this adjacent pair the spread is 2 t (1-t) W_1.
  double expect_w1 = lambda * x * nd;
  double expect_spread = 2.0 * t * (1.0 - t) * expect_w1;
  double tol = 1e-9 * (1.0 + expect_w1);
  bool all_pass = adjacent && eta_intermediate &&
                  std::fabs(w1_endpoints - expect_w1) <= tol &&
                  std::fabs(w1_eta_pair - expect_spread) <= tol &&
                  std::fabs(diameter_bound - expect_spread) <= tol;

  return {w1_endpoints, adjacent,        eta_intermediate,
          w1_eta_pair,  diameter_bound,  std::move(mu_n),
          std::move(eta_prime), all_pass};
}

}  // namespace otlab
