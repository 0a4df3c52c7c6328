#include "otlab/report.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "otlab/json_io.hpp"

namespace otlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform [0, 1) straight from the engine bits. The mt19937_64 stream is
// fully specified, unlike the standard distributions, so reports stay
// byte-identical across standard libraries.
double rand01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::string render(double v) { return json(v).dump(); }

struct SuiteBuilder {
  RunReport report;

  explicit SuiteBuilder(std::string suite, std::uint64_t seed) {
    report.suite = std::move(suite);
    report.seed = seed;
  }

  void near(const std::string& id, const std::string& description,
            double expected, double actual, double tol) {
    report.assertions.push_back({id, description, render(expected),
                                 render(actual), tol,
                                 std::fabs(expected - actual) <= tol});
  }

  void truth(const std::string& id, const std::string& description,
             bool actual, bool expected = true) {
    report.assertions.push_back({id, description, expected ? "true" : "false",
                                 actual ? "true" : "false", 0.0,
                                 actual == expected});
  }
};

// ---------------------------------------------------------------------------
// ray-formulas
// ---------------------------------------------------------------------------

RunReport suite_ray_formulas(std::uint64_t seed) {
  SuiteBuilder b("ray-formulas", seed);
  std::mt19937_64 eng(seed);
  SpacePtr ray = make_ray();

  const double ps[] = {1.0, 2.0, 3.0};
  for (int k = 0; k < 4; ++k) {
    double x = 1.0 + 4.0 * rand01(eng);
    double y = x + 3.0 * rand01(eng);
    for (double p : ps) {
      double closed = sigma_distance(x, y, p);
      double solved =
          solve_wp(sigma1_measure(ray, x, p), sigma1_measure(ray, y, p), p)
              .wp();
      b.near("pair-" + std::to_string(k) + "-p" + render(p),
             "closed form vs solver on the two-atom family", closed, solved,
             1e-9);
    }
  }

  for (double x : {1.5, 2.0, 3.0}) {
    for (double p : ps) {
      double to_dirac = sigma_distance_to_dirac1(x, p);
      double to_square = sigma_distance(x, x * x, p);
      b.near("fold-x" + render(x) + "-p" + render(p),
             "distance to delta_1 equals distance to the squared parameter",
             to_dirac, to_square, 1e-10);
    }
  }
  return b.report;
}

// ---------------------------------------------------------------------------
// delta2-chart
// ---------------------------------------------------------------------------

RunReport suite_delta2_chart(std::uint64_t seed) {
  SuiteBuilder b("delta2-chart", seed);
  std::mt19937_64 eng(seed);

  const Delta2Chart c1{0.0, 1.0, 0.0};
  const Delta2Chart c2{0.0, 1.0, std::log(2.0)};
  Delta2Pair pair = delta2_pair(c1, c2);
  double solved = solve_wp(pair.first, pair.second, 2.0).wp();
  b.near("canonical-squared",
         "squared chart distance on the canonical asymmetric pair", 1.0,
         solved * solved, 1e-10);
  b.near("canonical-formula", "decaying-exponent formula matches the solver",
         delta2_squared_distance(c1, c2), solved * solved, 1e-10);
  b.truth("canonical-variant-negative",
          "growing-exponent variant turns negative on the canonical pair",
          delta2_squared_distance_sign_variant(c1, c2) < 0.0);

  bool variant_disagrees = true;
  for (int k = 0; k < 6; ++k) {
    Delta2Chart a{4.0 * rand01(eng) - 2.0, 0.3 + 1.7 * rand01(eng),
                  3.0 * rand01(eng) - 1.5};
    Delta2Chart c{4.0 * rand01(eng) - 2.0, 0.3 + 1.7 * rand01(eng),
                  3.0 * rand01(eng) - 1.5};
    Delta2Pair pr = delta2_pair(a, c);
    double w = solve_wp(pr.first, pr.second, 2.0).wp();
    b.near("random-" + std::to_string(k),
           "squared chart distance vs solver on a random pair",
           delta2_squared_distance(a, c), w * w, 1e-9);
    if (std::fabs(a.r - c.r) > 0.2 &&
        std::fabs(delta2_squared_distance_sign_variant(a, c) - w * w) < 1e-3)
      variant_disagrees = false;
  }
  b.truth("variant-disagrees",
          "growing-exponent variant disagrees on every asymmetric pair",
          variant_disagrees);
  return b.report;
}

// ---------------------------------------------------------------------------
// exotic
// ---------------------------------------------------------------------------

RunReport suite_exotic(std::uint64_t seed) {
  SuiteBuilder b("exotic", seed);
  std::mt19937_64 eng(seed);

  SpacePtr H = make_euclidean(2);
  SpacePtr Y = make_finite_from_line({0.0, 1.0, 2.5});
  SpacePtr space = make_qproduct(H, Y, 2.0);

  double theta = 2.0 * kPi * rand01(eng);
  double c = std::cos(theta), s = std::sin(theta);
  IsometryCandidate phi = exotic_isometry(space, {{c, -s}, {s, c}});

  auto random_measure = [&]() {
    std::size_t count = 2 + static_cast<std::size_t>(eng() % 3);
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < count; ++k) {
      Point h = Point::vec(
          {4.0 * rand01(eng) - 2.0, 4.0 * rand01(eng) - 2.0});
      Point y = Point::index(static_cast<std::size_t>(eng() % 3));
      atoms.push_back({Point::pair(h, y), 0.1 + rand01(eng)});
    }
    return AtomicMeasure::normalized(space, std::move(atoms));
  };

  std::vector<std::pair<AtomicMeasure, AtomicMeasure>> pairs;
  for (int k = 0; k < 6; ++k) pairs.emplace_back(random_measure(), random_measure());
  b.near("distortion", "largest W_2 distortion across sampled pairs", 0.0,
         verify_isometry(phi, pairs, 2.0), 1e-9);

  Point dirac_pt =
      Point::pair(Point::vec({0.7, -0.3}), Point::index(1));
  AtomicMeasure dirac = AtomicMeasure::dirac(space, dirac_pt);
  b.truth("dirac-fixed", "every Dirac is a fixed point",
          measures_equal(phi.apply(dirac), dirac, 0.0));

  // One-third / two-thirds witness: the map moves the light atom to
  // (2/3) v - (2/3) psi(v), so it is not a point push-forward.
  std::vector<double> v = {1.2, 0.4};
  Point y0 = Point::index(0);
  AtomicMeasure witness = AtomicMeasure::make(
      space, {{Point::pair(Point::vec({0.0, 0.0}), y0), 1.0 / 3.0},
              {Point::pair(Point::vec(v), y0), 2.0 / 3.0}});
  AtomicMeasure moved = phi.apply(witness);
  std::vector<double> image = {2.0 / 3.0 * v[0] - 2.0 / 3.0 * (c * v[0] - s * v[1]),
                               2.0 / 3.0 * v[1] - 2.0 / 3.0 * (s * v[0] + c * v[1])};
  Point expected = Point::pair(Point::vec(image), y0);
  bool found = false;
  for (const auto& atom : moved.atoms())
    if (points_equal(atom.point, expected) &&
        std::fabs(atom.weight - 1.0 / 3.0) <= 1e-12)
      found = true;
  b.truth("witness-atom",
          "light witness atom lands on the rotated recentering", found);
  return b.report;
}

// ---------------------------------------------------------------------------
// frechet
// ---------------------------------------------------------------------------

RunReport suite_frechet(std::uint64_t seed) {
  SuiteBuilder b("frechet", seed);
  std::mt19937_64 eng(seed);

  SpacePtr H = make_euclidean(2);
  SpacePtr Y = make_finite_from_line({0.0, 0.7, 1.9});
  SpacePtr space = make_qproduct(H, Y, 2.0);

  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    std::vector<Atom> atoms;
    std::size_t count = 2 + static_cast<std::size_t>(eng() % 4);
    for (std::size_t a = 0; a < count; ++a)
      atoms.push_back(
          {Point::pair(Point::vec({4.0 * rand01(eng) - 2.0,
                                   4.0 * rand01(eng) - 2.0}),
                       Point::index(static_cast<std::size_t>(eng() % 3))),
           0.1 + rand01(eng)});
    AtomicMeasure mu = AtomicMeasure::normalized(space, std::move(atoms));
    auto [mu_h, mu_y] = marginals(mu);
    for (int t = 0; t < 4; ++t) {
      Point h = Point::vec({4.0 * rand01(eng) - 2.0, 4.0 * rand01(eng) - 2.0});
      Point y = Point::index(static_cast<std::size_t>(eng() % 3));
      double whole = frechet_function(mu, Point::pair(h, y));
      double split = frechet_function(mu_h, h) + frechet_function(mu_y, y);
      worst = std::max(worst, std::fabs(whole - split));
    }
  }
  b.near("additivity", "functional splits across the two factors", 0.0, worst,
         1e-12);

  std::vector<Atom> atoms;
  for (int k = 0; k < 4; ++k)
    atoms.push_back({Point::vec({4.0 * rand01(eng) - 2.0,
                                 4.0 * rand01(eng) - 2.0}),
                     0.1 + rand01(eng)});
  AtomicMeasure mu = AtomicMeasure::normalized(H, std::move(atoms));
  Point bary = barycenter(mu);
  const auto& bv = bary.as_vector();
  std::vector<Point> grid;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      grid.push_back(Point::vec({bv[0] + 0.01 * i, bv[1] + 0.01 * j}));
  std::vector<Point> argmin = frechet_mean_set(mu, grid);
  b.truth("barycenter-argmin",
          "grid minimum sits exactly at the weighted mean",
          argmin.size() == 1 && points_equal(argmin[0], bary));
  return b.report;
}

// ---------------------------------------------------------------------------
// cylinder-branching
// ---------------------------------------------------------------------------

RunReport suite_cylinder_branching(std::uint64_t seed) {
  SuiteBuilder b("cylinder-branching", seed);

  SpacePtr base = make_interval(0.0, 1.0);
  AtomicMeasure base_mu = AtomicMeasure::make(
      base, {{Point::scalar(0.0), 0.5}, {Point::scalar(1.0), 0.5}});
  CylinderBranchingReport r =
      cylinder_branching_experiment(base, base_mu, 2.0, 2.0);

  b.near("diameter", "support diameter of the base measure", 1.0, r.diameter,
         0.0);
  b.near("crossing-cost", "optimal plan crosses sideways", 1.0,
         r.crossing_cost, 1e-9);
  b.near("vertical-cost", "stay-in-place alternative swaps heights", 4.0,
         r.vertical_cost, 1e-12);

  AtomicMeasure lifted = push_forward(
      base_mu,
      [](const Point& x) { return Point::pair(x, Point::scalar(0.0)); },
      r.cylinder);
  b.truth("endpoints-in-I", "both raised measures project back to the base",
          cylinder_I_membership(r.nu0, lifted) &&
              cylinder_I_membership(r.nu1, lifted));
  b.truth("midpoint-exists", "interval bases admit displacement midpoints",
          r.midpoint.has_value());
  if (r.midpoint) {
    b.truth("midpoint-verified", "displacement midpoint passes verification",
            verify_midpoint(r.nu0, r.nu1, *r.midpoint, 2.0));
    b.truth("midpoint-left-I", "midpoint projects outside the base measure",
            r.midpoint_left_I.value_or(false));
    b.near("base-tv-gap", "total variation between projection and base", 1.0,
           r.base_tv_gap.value_or(0.0), 1e-9);
  }
  return b.report;
}

// ---------------------------------------------------------------------------
// suspension-midpoints
// ---------------------------------------------------------------------------

RunReport suite_suspension_midpoints(std::uint64_t seed) {
  SuiteBuilder b("suspension-midpoints", seed);

  SpacePtr base = make_finite_from_line({0.0, 0.4});
  SpacePtr susp = make_suspension(base);
  AtomicMeasure nu = AtomicMeasure::make(
      susp, {{Point::susp(kPi / 2.0, Point::index(0)), 0.5},
             {Point::susp(kPi / 2.0, Point::index(1)), 0.5}});

  TwoMidpointsResult two = suspension_two_midpoints(nu);
  b.near("lambda", "pole split equals the far-cluster mass", 0.5, two.lambda,
         1e-12);
  b.truth("m1-verified", "cluster-split midpoint passes verification",
          verify_midpoint(nu, two.pole_measure, two.m1, 2.0));
  b.truth("m2-verified", "uniform-split midpoint passes verification",
          verify_midpoint(nu, two.pole_measure, two.m2, 2.0));
  b.truth("midpoints-distinct", "the two midpoints are different measures",
          !measures_equal(two.m1, two.m2));
  double sep = solve_wp(two.m1, two.m2, 2.0).wp();
  double expected_sep =
      std::sqrt(0.5) * std::acos(0.5 + 0.5 * std::cos(0.4));
  b.near("separation", "W_2 gap between the midpoints", expected_sep, sep,
         1e-9);

  double fiber = distance_to_fiber(nu, kPi / 4.0, 2.0).wp;
  b.near("fiber-distance", "distance to the quarter-latitude fiber",
         kPi / 4.0, fiber, 0.0);

  bool dirac_unique = false;
  bool dirac_mid_ok = false;
  try {
    suspension_two_midpoints(
        AtomicMeasure::dirac(susp, Point::susp(kPi / 2.0, Point::index(0))),
        0.5);
  } catch (const dirac_midpoint_unique& e) {
    dirac_unique = true;
    const AtomicMeasure& mid = *e.unique_midpoint;
    AtomicMeasure dirac =
        AtomicMeasure::dirac(susp, Point::susp(kPi / 2.0, Point::index(0)));
    AtomicMeasure poles = AtomicMeasure::make(
        susp, {{Point::pole_zero(), 0.5}, {Point::pole_pi(), 0.5}});
    dirac_mid_ok = verify_midpoint(dirac, poles, mid, 2.0);
  }
  b.truth("dirac-unique", "equator Diracs report a unique midpoint",
          dirac_unique);
  b.truth("dirac-midpoint-verified", "the unique midpoint verifies",
          dirac_mid_ok);
  (void)seed;
  return b.report;
}

// ---------------------------------------------------------------------------
// conditions
// ---------------------------------------------------------------------------

RunReport suite_conditions(std::uint64_t seed) {
  SuiteBuilder b("conditions", seed);

  SpacePtr line = make_finite_from_line({0.0, 0.5, 1.0});
  auto mid = condition_a_check(*line, {Point::index(0)});
  b.truth("between-endpoint",
          "interior point strictly between the endpoint and the far end",
          mid.has_value() && mid->as_index() == 1);
  auto both = condition_a_check(*line, {Point::index(0), Point::index(2)});
  b.truth("between-both-endpoints",
          "one interior point covers both endpoints",
          both.has_value() && both->as_index() == 1);

  // Four-cycle: every vertex lies strictly between its two neighbours.
  std::vector<double> cycle = {0, 1, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1, 0};
  SpacePtr four = make_finite(4, cycle);
  auto vertex = condition_a_check(*four, {Point::index(0)});
  b.truth("cycle-neighbour",
          "adjacent vertex qualifies on the four-cycle",
          vertex.has_value() && vertex->as_index() == 1);

  auto sep = condition_b_check(*line, {Point::index(0), Point::index(2)},
                               {kPi / 8.0, 3.0 * kPi / 8.0});
  b.truth("products-separated",
          "tangent products separate from the first vertex",
          sep.has_value() && sep->as_index() == 0);

  bool rejects_half_pi = false;
  try {
    condition_b_check(*line, {Point::index(0)}, {kPi / 2.0});
  } catch (const input_error&) {
    rejects_half_pi = true;
  }
  b.truth("rejects-vertical-latitude",
          "latitude pi/2 is rejected as degenerate", rejects_half_pi);

  bool rejects_duplicate = false;
  try {
    condition_b_check(*line, {Point::index(0)}, {kPi / 8.0, kPi / 8.0});
  } catch (const input_error&) {
    rejects_duplicate = true;
  }
  b.truth("rejects-duplicate-latitude",
          "duplicate latitudes are rejected", rejects_duplicate);
  (void)seed;
  return b.report;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispatch and serialization
// ---------------------------------------------------------------------------

bool RunReport::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "ray-formulas",       "delta2-chart", "exotic",
      "frechet",            "cylinder-branching",
      "suspension-midpoints", "conditions"};
  return names;
}

RunReport run_suite(const std::string& name, std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  RunReport report;
  if (name == "ray-formulas")
    report = suite_ray_formulas(seed);
  else if (name == "delta2-chart")
    report = suite_delta2_chart(seed);
  else if (name == "exotic")
    report = suite_exotic(seed);
  else if (name == "frechet")
    report = suite_frechet(seed);
  else if (name == "cylinder-branching")
    report = suite_cylinder_branching(seed);
  else if (name == "suspension-midpoints")
    report = suite_suspension_midpoints(seed);
  else if (name == "conditions")
    report = suite_conditions(seed);
  else
    throw input_error("unknown suite '" + name + "'");
  auto end = std::chrono::steady_clock::now();
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

std::string report_to_json(const RunReport& report) {
  return report_to_json_value(report).dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  return report_from_json_value(parse_json_text(text));
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "suite,seed,id,description,expected,actual,tolerance,pass\n";
  for (const auto& a : report.assertions) {
    out << csv_escape(report.suite) << ',' << report.seed << ','
        << csv_escape(a.id) << ',' << csv_escape(a.description) << ','
        << csv_escape(a.expected) << ',' << csv_escape(a.actual) << ','
        << render(a.tolerance) << ',' << (a.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace otlab
