#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "otlab/interpolate.hpp"

using namespace otlab;

namespace {

double rand01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

AtomicMeasure random_interval_measure(std::mt19937_64& eng,
                                      const SpacePtr& space, double width,
                                      std::size_t max_extra) {
  std::vector<Atom> atoms;
  std::size_t n = 2 + static_cast<std::size_t>(eng() % (max_extra + 1));
  for (std::size_t k = 0; k < n; ++k)
    atoms.push_back({Point::scalar(width * rand01(eng)), 0.1 + rand01(eng)});
  return AtomicMeasure::normalized(space, std::move(atoms));
}

}  // namespace

TEST_CASE("displacement paths hit their endpoints and stay on schedule") {
  std::mt19937_64 eng(29);
  SpacePtr iv = make_interval(0.0, 6.0);

  for (int rep = 0; rep < 12; ++rep) {
    AtomicMeasure mu = random_interval_measure(eng, iv, 6.0, 4);
    AtomicMeasure nu = random_interval_measure(eng, iv, 6.0, 4);
    TransportPlan plan = solve_wp(mu, nu, 2.0);
    WassersteinPath path = displacement_path(plan);

    REQUIRE(measures_equal(path.at(0.0), mu, 1e-12));
    REQUIRE(measures_equal(path.at(1.0), nu, 1e-12));

    AtomicMeasure mid = path.at(0.5);
    REQUIRE(verify_midpoint(mu, nu, mid, 2.0, 1e-9));
    for (double t : {0.25, 0.75})
      REQUIRE(verify_intermediate(mu, nu, path.at(t), t, 2.0, 1e-9));

    // Constant speed along the whole curve, not only to the endpoints.
    double w = plan.wp();
    const double samples[] = {0.0, 0.3, 0.5, 0.8, 1.0};
    for (double s : samples)
      for (double t : samples) {
        double hop = solve_wp(path.at(s), path.at(t), 2.0).wp();
        REQUIRE(hop == doctest::Approx(std::fabs(s - t) * w).epsilon(1e-9));
      }

    AtomicMeasure direct = displacement_interpolate(plan, 0.5);
    REQUIRE(measures_equal(direct, mid, 1e-12));
  }

  TransportPlan dirac_plan =
      solve_wp(AtomicMeasure::dirac(iv, Point::scalar(1.0)),
               AtomicMeasure::dirac(iv, Point::scalar(5.0)), 2.0);
  REQUIRE_THROWS_AS(displacement_path(dirac_plan).at(1.5), input_error);
}

TEST_CASE("midpoint verification rejects off-geodesic measures") {
  SpacePtr iv = make_interval(0.0, 2.0);
  AtomicMeasure d0 = AtomicMeasure::dirac(iv, Point::scalar(0.0));
  AtomicMeasure d2 = AtomicMeasure::dirac(iv, Point::scalar(2.0));
  AtomicMeasure d1 = AtomicMeasure::dirac(iv, Point::scalar(1.0));
  AtomicMeasure skew = AtomicMeasure::dirac(iv, Point::scalar(1.3));

  REQUIRE(verify_midpoint(d0, d2, d1, 2.0));
  REQUIRE_FALSE(verify_midpoint(d0, d2, skew, 2.0));
  REQUIRE(verify_intermediate(d0, d2, skew, 0.65, 2.0));
  REQUIRE_THROWS_AS(verify_intermediate(d0, d2, d1, 1.5, 2.0), input_error);
}

TEST_CASE("midpoint set diameter in W_1") {
  SpacePtr ray = make_ray();
  auto m = [&](std::vector<Atom> atoms) {
    return AtomicMeasure::make(ray, std::move(atoms));
  };
  AtomicMeasure d0 = AtomicMeasure::dirac(ray, Point::scalar(0.0));
  AtomicMeasure d1 = AtomicMeasure::dirac(ray, Point::scalar(1.0));

  // Adjacent pair: the bound is 2 t (1 - t) W_1 on the nose.
  REQUIRE(midpoint_diameter_1d(d0, d1) == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(intermediate_diameter_1d(d0, d1, 0.25) ==
          doctest::Approx(0.375).epsilon(1e-12));

  AtomicMeasure half01 =
      m({{Point::scalar(0.0), 0.5}, {Point::scalar(1.0), 0.5}});
  AtomicMeasure half02 =
      m({{Point::scalar(0.0), 0.5}, {Point::scalar(2.0), 0.5}});
  REQUIRE(adjacency_test(half01, half02));
  REQUIRE(midpoint_diameter_1d(half01, half02) ==
          doctest::Approx(0.25).epsilon(1e-12));

  // Non-adjacent pair: quantile midpoint (1/2) d_1 + (1/2) d_3 versus the
  // mixture sit at W_1 distance 1 by the quantile integral, strictly below
  // the adjacent-case value W_1 / 2 = 1.5.
  AtomicMeasure half25 =
      m({{Point::scalar(2.0), 0.5}, {Point::scalar(5.0), 0.5}});
  REQUIRE_FALSE(adjacency_test(half01, half25));
  double w1 = wp_1d(half01, half25, 1.0);
  REQUIRE(w1 == doctest::Approx(3.0).epsilon(1e-12));
  double diam = midpoint_diameter_1d(half01, half25);
  REQUIRE(diam == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(diam < w1 / 2.0);

  REQUIRE(intermediate_diameter_1d(d0, d1, 0.0) == 0.0);
  REQUIRE(intermediate_diameter_1d(d0, d1, 1.0) == 0.0);
  REQUIRE_THROWS_AS(intermediate_diameter_1d(d0, d1, -0.1), input_error);
}

TEST_CASE("membership in the two-atom family anchored at the origin") {
  SpacePtr ray = make_ray();
  auto m = [&](std::vector<Atom> atoms) {
    return AtomicMeasure::make(ray, std::move(atoms));
  };
  REQUIRE(sigma_member(AtomicMeasure::dirac(ray, Point::scalar(0.0))));
  REQUIRE(sigma_member(AtomicMeasure::dirac(ray, Point::scalar(2.0))));
  REQUIRE(sigma_member(m({{Point::scalar(0.0), 0.5},
                          {Point::scalar(3.0), 0.5}})));
  REQUIRE_FALSE(sigma_member(m({{Point::scalar(1.0), 0.5},
                                {Point::scalar(2.0), 0.5}})));
  REQUIRE_FALSE(sigma_member(m({{Point::scalar(0.0), 0.4},
                                {Point::scalar(1.0), 0.3},
                                {Point::scalar(2.0), 0.3}})));
}

TEST_CASE("the maximal ray witness is geodesic in every W_p at once") {
  SpacePtr ray = make_ray();
  AtomicMeasure mu = AtomicMeasure::make(ray, {{Point::scalar(1.0), 0.25},
                                               {Point::scalar(2.0), 0.5},
                                               {Point::scalar(4.0), 0.25}});
  WassersteinPath path = sigma_ray_witness(mu, 0.25);
  REQUIRE(path.t_max == std::numeric_limits<double>::infinity());

  REQUIRE(measures_equal(path.at(1.0), mu, 1e-12));
  REQUIRE(measures_equal(path.at(0.0),
                         AtomicMeasure::dirac(ray, Point::scalar(1.0)),
                         1e-12));

  // Quantile speeds: the moving quantile exceeds v_1 = 1 by 1 on mass 1/2
  // and by 3 on mass 1/4, so the W_1 speed is 1.25 and the squared W_2
  // speed is 0.5 + 2.25 = 2.75.
  const double samples[] = {0.0, 0.5, 1.0, 2.0, 3.0};
  for (double s : samples)
    for (double t : samples) {
      double gap = std::fabs(s - t);
      REQUIRE(wp_1d(path.at(s), path.at(t), 1.0) ==
              doctest::Approx(gap * 1.25).epsilon(1e-12));
      REQUIRE(wp_1d(path.at(s), path.at(t), 2.0) ==
              doctest::Approx(gap * std::sqrt(2.75)).epsilon(1e-12));
    }

  // Past t = 1 the path keeps stretching; it never doubles back.
  REQUIRE(wp_1d(path.at(0.0), path.at(3.0), 1.0) ==
          doctest::Approx(3.0 * 1.25).epsilon(1e-12));

  auto member = AtomicMeasure::make(
      ray, {{Point::scalar(0.0), 0.5}, {Point::scalar(3.0), 0.5}});
  REQUIRE_THROWS_AS(sigma_ray_witness(member, 0.5), input_error);
  REQUIRE_THROWS_AS(sigma_ray_witness(mu, 0.0), input_error);
  REQUIRE_THROWS_AS(sigma_ray_witness(mu, 1.0), input_error);

  // Split level inside the mass at the origin: the base quantile vanishes.
  AtomicMeasure at_zero = AtomicMeasure::make(ray, {{Point::scalar(0.0), 0.5},
                                                    {Point::scalar(1.0), 0.25},
                                                    {Point::scalar(2.0), 0.25}});
  REQUIRE_THROWS_AS(sigma_ray_witness(at_zero, 0.25), input_error);

  // Nothing above the split level moves: no ray emanates.
  AtomicMeasure flat = AtomicMeasure::make(
      ray, {{Point::scalar(1.0), 0.25}, {Point::scalar(2.0), 0.75}});
  REQUIRE_THROWS_AS(sigma_ray_witness(flat, 0.5), input_error);
}
