#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "otlab/transport.hpp"
#include "oracles.hpp"

using namespace otlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rand01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double pow_ref(double d, double p) { return std::pow(d, p); }

// Measure with unit-fraction weights (units / denom) at the given points,
// so the brute-force enumerator can reproduce the cost exactly.
AtomicMeasure unit_measure(const SpacePtr& space,
                           const std::vector<Point>& pts,
                           const std::vector<long>& units, long denom) {
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < pts.size(); ++k)
    atoms.push_back({pts[k], static_cast<double>(units[k]) /
                                 static_cast<double>(denom)});
  return AtomicMeasure::make(space, std::move(atoms), 1e-9);
}

void check_against_oracle(const SpacePtr& space,
                          const std::vector<Point>& xs,
                          const std::vector<long>& ua,
                          const std::vector<Point>& ys,
                          const std::vector<long>& ub, long denom, double p) {
  AtomicMeasure mu = unit_measure(space, xs, ua, denom);
  AtomicMeasure nu = unit_measure(space, ys, ub, denom);
  // The dedup in make() must not have merged anything, or the unit vectors
  // would no longer describe the measures.
  REQUIRE(mu.size() == xs.size());
  REQUIRE(nu.size() == ys.size());

  // make() orders atoms canonically, so read the units back off the sorted
  // atoms; the insertion-order vectors would pair units with wrong rows.
  // Renormalization inside make() may shave an ulp off each weight, so the
  // recovery is by nearest integer, not bit equality.
  auto sorted_units = [denom](const AtomicMeasure& m) {
    std::vector<long> units;
    for (const Atom& at : m.atoms()) {
      long u = std::lround(at.weight * static_cast<double>(denom));
      REQUIRE(std::fabs(static_cast<double>(u) / static_cast<double>(denom) -
                        at.weight) < 1e-12);
      units.push_back(u);
    }
    return units;
  };
  std::vector<long> sa = sorted_units(mu), sb = sorted_units(nu);

  std::vector<double> cost(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      cost[i * ys.size() + j] =
          pow_ref(distance(*space, mu.atoms()[i].point, nu.atoms()[j].point),
                  p);
  double expected = oracle::brute_force_cost(sa, sb, denom, cost);
  TransportPlan plan = solve_wp(mu, nu, p);
  REQUIRE(plan.cost() == doctest::Approx(expected).epsilon(1e-9));
}

}  // namespace

TEST_CASE("solver matches the brute-force enumerator across space kinds") {
  std::mt19937_64 eng(7);

  SpacePtr ray = make_ray();
  for (int rep = 0; rep < 6; ++rep) {
    std::vector<Point> xs, ys;
    for (int k = 0; k < 3; ++k) xs.push_back(Point::scalar(6.0 * rand01(eng)));
    for (int k = 0; k < 4; ++k) ys.push_back(Point::scalar(6.0 * rand01(eng)));
    check_against_oracle(ray, xs, {2, 3, 3}, ys, {1, 3, 2, 2}, 8,
                         rep % 2 ? 1.0 : 2.0);
  }

  SpacePtr euc = make_euclidean(2);
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<Point> xs, ys;
    for (int k = 0; k < 3; ++k)
      xs.push_back(Point::vec({4.0 * rand01(eng) - 2.0,
                               4.0 * rand01(eng) - 2.0}));
    for (int k = 0; k < 3; ++k)
      ys.push_back(Point::vec({4.0 * rand01(eng) - 2.0,
                               4.0 * rand01(eng) - 2.0}));
    check_against_oracle(euc, xs, {1, 2, 3}, ys, {2, 2, 2}, 6, 2.0);
  }

  SpacePtr line = make_finite_from_line({0.0, 0.4, 1.0, 2.3});
  check_against_oracle(line,
                       {Point::index(0), Point::index(1), Point::index(2)},
                       {3, 1, 2},
                       {Point::index(1), Point::index(3)}, {4, 2}, 6, 2.0);

  SpacePtr prod = make_qproduct(make_euclidean(1), line, 2.0);
  check_against_oracle(
      prod,
      {Point::pair(Point::vec({0.0}), Point::index(0)),
       Point::pair(Point::vec({1.0}), Point::index(2))},
      {3, 3},
      {Point::pair(Point::vec({0.5}), Point::index(1)),
       Point::pair(Point::vec({2.0}), Point::index(3)),
       Point::pair(Point::vec({-1.0}), Point::index(0))},
      {2, 2, 2}, 6, 2.0);

  SpacePtr susp = make_suspension(make_finite_from_line({0.0, 0.4}));
  check_against_oracle(
      susp,
      {Point::susp(kPi / 2.0, Point::index(0)),
       Point::susp(kPi / 2.0, Point::index(1))},
      {3, 3},
      {Point::pole_zero(), Point::susp(kPi / 4.0, Point::index(0)),
       Point::pole_pi()},
      {2, 2, 2}, 6, 2.0);
}

TEST_CASE("plan invariants and exactness") {
  std::mt19937_64 eng(11);
  SpacePtr iv = make_interval(0.0, 5.0);

  std::vector<Atom> a, b;
  for (int k = 0; k < 7; ++k)
    a.push_back({Point::scalar(5.0 * rand01(eng)), 0.1 + rand01(eng)});
  for (int k = 0; k < 5; ++k)
    b.push_back({Point::scalar(5.0 * rand01(eng)), 0.1 + rand01(eng)});
  AtomicMeasure mu = AtomicMeasure::normalized(iv, std::move(a));
  AtomicMeasure nu = AtomicMeasure::normalized(iv, std::move(b));

  TransportPlan plan = solve_wp(mu, nu, 2.0);
  REQUIRE(plan.entries().size() <= mu.size() + nu.size() - 1);
  std::vector<double> row(mu.size(), 0.0), col(nu.size(), 0.0);
  for (std::size_t k = 0; k < plan.entries().size(); ++k) {
    const PlanEntry& e = plan.entries()[k];
    REQUIRE(e.mass > 0.0);
    row[e.i] += e.mass;
    col[e.j] += e.mass;
    if (k > 0) {
      const PlanEntry& prev = plan.entries()[k - 1];
      REQUIRE((prev.i < e.i || (prev.i == e.i && prev.j < e.j)));
    }
  }
  for (std::size_t i = 0; i < mu.size(); ++i)
    REQUIRE(row[i] == doctest::Approx(mu.atoms()[i].weight).epsilon(1e-10));
  for (std::size_t j = 0; j < nu.size(); ++j)
    REQUIRE(col[j] == doctest::Approx(nu.atoms()[j].weight).epsilon(1e-10));

  // Self-distance is exactly zero: the diagonal plan survives filtering.
  REQUIRE(solve_wp(mu, mu, 2.0).wp() == 0.0);
  REQUIRE(solve_wp(mu, mu, 1.0).cost() == 0.0);

  // Bit-identical symmetry through canonical pair ordering.
  REQUIRE(solve_wp(mu, nu, 2.0).wp() == solve_wp(nu, mu, 2.0).wp());
  REQUIRE(solve_wp(mu, nu, 1.5).wp() == solve_wp(nu, mu, 1.5).wp());
}

TEST_CASE("Dirac pairs return the raw distance") {
  SpacePtr susp = make_suspension(make_finite_from_line({0.0, 0.4}));
  AtomicMeasure zero = AtomicMeasure::dirac(susp, Point::pole_zero());
  AtomicMeasure pi = AtomicMeasure::dirac(susp, Point::pole_pi());
  for (double p : {1.0, 2.0, 3.0})
    REQUIRE(solve_wp(zero, pi, p).wp() == kPi);  // exact, no root round trip

  SpacePtr ray = make_ray();
  AtomicMeasure da = AtomicMeasure::dirac(ray, Point::scalar(0.7));
  AtomicMeasure db = AtomicMeasure::dirac(ray, Point::scalar(2.9));
  REQUIRE(wp_1d(da, db, 3.0) == std::fabs(0.7 - 2.9));
  REQUIRE(solve_wp(da, db, 3.0).wp() == std::fabs(0.7 - 2.9));
}

TEST_CASE("triangle inequality over random interval measures") {
  std::mt19937_64 eng(13);
  SpacePtr iv = make_interval(0.0, 4.0);
  auto random_measure = [&]() {
    std::vector<Atom> atoms;
    std::size_t n = 2 + static_cast<std::size_t>(eng() % 4);
    for (std::size_t k = 0; k < n; ++k)
      atoms.push_back({Point::scalar(4.0 * rand01(eng)), 0.1 + rand01(eng)});
    return AtomicMeasure::normalized(iv, std::move(atoms));
  };
  for (int rep = 0; rep < 20; ++rep) {
    AtomicMeasure a = random_measure(), b = random_measure(),
                  c = random_measure();
    for (double p : {1.0, 2.0}) {
      double ab = solve_wp(a, b, p).wp();
      double bc = solve_wp(b, c, p).wp();
      double ac = solve_wp(a, c, p).wp();
      REQUIRE(ac <= ab + bc + 1e-10);
    }
  }
}

TEST_CASE("quantile route agrees with the simplex on the ray") {
  std::mt19937_64 eng(17);
  SpacePtr ray = make_ray();
  auto random_measure = [&](std::size_t max_atoms) {
    std::vector<Atom> atoms;
    std::size_t n = 2 + static_cast<std::size_t>(eng() % max_atoms);
    for (std::size_t k = 0; k < n; ++k)
      atoms.push_back({Point::scalar(8.0 * rand01(eng)), 0.05 + rand01(eng)});
    return AtomicMeasure::normalized(ray, std::move(atoms));
  };
  const double ps[] = {1.0, 1.5, 2.0, 3.0};
  for (int rep = 0; rep < 50; ++rep) {
    AtomicMeasure mu = random_measure(11), nu = random_measure(11);
    double p = ps[rep % 4];
    double lhs = solve_wp(mu, nu, p).wp();
    double rhs = wp_1d(mu, nu, p);
    REQUIRE(std::fabs(lhs - rhs) <= 1e-9 * (1.0 + rhs));
  }
}

TEST_CASE("cyclical monotonicity separates optimal from crossed plans") {
  SpacePtr ray = make_ray();
  AtomicMeasure mu = AtomicMeasure::make(
      ray, {{Point::scalar(0.0), 0.5}, {Point::scalar(1.0), 0.5}});
  AtomicMeasure nu = AtomicMeasure::make(
      ray, {{Point::scalar(2.0), 0.5}, {Point::scalar(3.0), 0.5}});

  TransportPlan optimal = solve_wp(mu, nu, 2.0);
  MonotonicityReport good = is_cyclically_monotone(optimal);
  REQUIRE(good.monotone);
  REQUIRE(good.violating_cycle.empty());

  // Crossed by hand: 0 -> 3 and 1 -> 2; exchanging saves (4-9)+(4-1) = -2.
  TransportPlan crossed = TransportPlan::make(
      mu, nu, {{0, 1, 0.5}, {1, 0, 0.5}}, 2.0);
  MonotonicityReport bad = is_cyclically_monotone(crossed);
  REQUIRE_FALSE(bad.monotone);
  REQUIRE(bad.violating_cycle.size() == 2);
  REQUIRE(bad.violation == doctest::Approx(-2.0).epsilon(1e-12));

  // Every solver plan in a random batch passes.
  std::mt19937_64 eng(19);
  SpacePtr iv = make_interval(0.0, 3.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Atom> a, b;
    for (int k = 0; k < 4; ++k) {
      a.push_back({Point::scalar(3.0 * rand01(eng)), 0.2 + rand01(eng)});
      b.push_back({Point::scalar(3.0 * rand01(eng)), 0.2 + rand01(eng)});
    }
    TransportPlan plan = solve_wp(AtomicMeasure::normalized(iv, std::move(a)),
                                  AtomicMeasure::normalized(iv, std::move(b)),
                                  rep % 2 ? 2.0 : 1.5);
    REQUIRE(is_cyclically_monotone(plan).monotone);
  }
}

TEST_CASE("one-dimensional adjacency brackets") {
  SpacePtr ray = make_ray();
  auto m = [&](std::vector<Atom> atoms) {
    return AtomicMeasure::make(ray, std::move(atoms));
  };
  AtomicMeasure d0 = AtomicMeasure::dirac(ray, Point::scalar(0.0));
  AtomicMeasure d1 = AtomicMeasure::dirac(ray, Point::scalar(1.0));

  // Diracs differ on exactly the bracket atoms with nothing inside.
  REQUIRE(adjacency_test(d0, d1));
  REQUIRE(adjacency_test(d0, d0));  // empty bracket

  AtomicMeasure half01 =
      m({{Point::scalar(0.0), 0.5}, {Point::scalar(1.0), 0.5}});
  AtomicMeasure half02 =
      m({{Point::scalar(0.0), 0.5}, {Point::scalar(2.0), 0.5}});
  AtomicMeasure half12 =
      m({{Point::scalar(1.0), 0.5}, {Point::scalar(2.0), 0.5}});

  // CDFs agree outside [1, 2) and are constant inside it.
  REQUIRE(adjacency_test(half01, half02));
  // The bracket [0, 2) contains the shared atom at 1: not adjacent.
  REQUIRE_FALSE(adjacency_test(half01, half12));
  // delta_0 vs the spread pair differs at 0 and 2 with nothing between.
  REQUIRE(adjacency_test(d0, half02));

  AtomicMeasure three = m({{Point::scalar(0.0), 0.4},
                           {Point::scalar(1.0), 0.3},
                           {Point::scalar(2.0), 0.3}});
  REQUIRE_FALSE(adjacency_test(d0, three));  // three differing atoms
}

TEST_CASE("fiber distance and its projection minimizer") {
  SpacePtr cyl = make_qproduct(make_interval(0.0, 1.0), make_ray(), 2.0);
  AtomicMeasure mu = AtomicMeasure::make(
      cyl, {{Point::pair(Point::scalar(0.2), Point::scalar(0.0)), 0.2},
            {Point::pair(Point::scalar(0.5), Point::scalar(1.0)), 0.3},
            {Point::pair(Point::scalar(0.9), Point::scalar(3.0)), 0.5}});
  FiberDistanceResult res = distance_to_fiber(mu, 1.0, 2.0);
  // frozen: oracle freeze runner, sqrt(0.2 * 1 + 0.5 * 4) = sqrt(2.2)
  REQUIRE(res.wp == doctest::Approx(1.4832396974191326).epsilon(1e-15));
  for (const auto& atom : res.minimizer.atoms())
    REQUIRE(atom.point.as_pair().right->as_scalar() == 1.0);

  // The projection is optimal: no fiber measure sits closer.
  std::mt19937_64 eng(23);
  for (int rep = 0; rep < 100; ++rep) {
    double w = 0.05 + 0.9 * rand01(eng);
    AtomicMeasure sigma = AtomicMeasure::make(
        cyl, {{Point::pair(Point::scalar(rand01(eng)), Point::scalar(1.0)), w},
              {Point::pair(Point::scalar(rand01(eng)), Point::scalar(1.0)),
               1.0 - w}},
        1e-9);
    REQUIRE(solve_wp(mu, sigma, 2.0).wp() >= res.wp - 1e-9);
  }

  // Suspension fibers: equator mass to the quarter latitude, exactly.
  SpacePtr susp = make_suspension(make_finite_from_line({0.0, 0.4}));
  AtomicMeasure nu = AtomicMeasure::make(
      susp, {{Point::susp(kPi / 2.0, Point::index(0)), 0.5},
             {Point::susp(kPi / 2.0, Point::index(1)), 0.5}});
  REQUIRE(distance_to_fiber(nu, kPi / 4.0, 2.0).wp == kPi / 4.0);

  // Poles in the support need the deterministic meridian extension: the pole
  // follows the first regular atom's base, so here both atoms land on the
  // same quarter-latitude point and merge.
  AtomicMeasure with_pole = AtomicMeasure::make(
      susp, {{Point::pole_zero(), 0.5},
             {Point::susp(kPi / 2.0, Point::index(1)), 0.5}});
  FiberDistanceResult pole_res = distance_to_fiber(with_pole, kPi / 4.0, 2.0);
  REQUIRE(pole_res.wp == kPi / 4.0);  // both latitudes move exactly pi/4
  REQUIRE(pole_res.minimizer.size() == 1);
  REQUIRE(pole_res.minimizer.atoms()[0].weight == 1.0);
  REQUIRE(pole_res.minimizer.atoms()[0].point.as_susp().angle == kPi / 4.0);
  REQUIRE(pole_res.minimizer.atoms()[0].point.as_susp().base->as_index() == 1);
}

TEST_CASE("support caps and bad inputs are rejected") {
  SpacePtr ray = make_ray();
  std::vector<Atom> big;
  for (int k = 0; k < 1023; ++k)
    big.push_back({Point::scalar(static_cast<double>(k)), 1.0 / 1023.0});
  AtomicMeasure huge = AtomicMeasure::make(ray, std::move(big), 1e-9);
  AtomicMeasure small = AtomicMeasure::dirac(ray, Point::scalar(0.0));
  REQUIRE_THROWS_AS(solve_wp(huge, small, 2.0), input_error);

  AtomicMeasure other =
      AtomicMeasure::dirac(make_interval(0.0, 1.0), Point::scalar(0.0));
  REQUIRE_THROWS_AS(solve_wp(small, other, 2.0), input_error);
  REQUIRE_THROWS_AS(solve_wp(small, small, 0.5), input_error);

  // The quantile route is for rays and intervals only.
  AtomicMeasure planar =
      AtomicMeasure::dirac(make_euclidean(2), Point::vec({0.0, 0.0}));
  REQUIRE_THROWS_AS(wp_1d(planar, planar, 2.0), input_error);

  AtomicMeasure two = AtomicMeasure::make(
      ray, {{Point::scalar(0.0), 0.5}, {Point::scalar(1.0), 0.5}});
  REQUIRE_THROWS_AS(
      TransportPlan::make(two, two, {{0, 0, 0.5}, {0, 1, 0.5}}, 2.0),
      input_error);  // row sums break the source marginal
}
