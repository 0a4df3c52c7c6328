#pragma once

// Exact discrete optimal transport. Two independent routes compute W_p:
// a dense network simplex over the bipartite support graph (any space) and
// the quantile integral (ray/interval only). The two share no coupling
// logic; their agreement is one of the standing acceptance checks.

#include <cstdint>
#include <vector>

#include "otlab/measure.hpp"

namespace otlab {

struct PlanEntry {
  std::size_t i;  // index into source atoms
  std::size_t j;  // index into target atoms
  double mass;    // > 0
};

// A feasible transport plan between two atomic measures. Construction
// recomputes the cost from the entries and validates the marginals:
// row/column sums match the atom weights within 1e-10 and the stored cost
// matches the recomputation within 1e-10 relative.
class TransportPlan {
 public:
  static TransportPlan make(AtomicMeasure source, AtomicMeasure target,
                            std::vector<PlanEntry> entries, double p);

  const AtomicMeasure& source() const { return source_; }
  const AtomicMeasure& target() const { return target_; }
  const std::vector<PlanEntry>& entries() const { return entries_; }
  double p() const { return p_; }
  double cost() const { return cost_; }  // integral of d^p against the plan

  // cost^(1/p). A single-entry plan returns its distance directly, which
  // keeps W_p(delta_a, delta_b) = d(a, b) exact (no root round trip).
  double wp() const;

 private:
  TransportPlan(AtomicMeasure source, AtomicMeasure target,
                std::vector<PlanEntry> entries, double p, double cost)
      : source_(std::move(source)), target_(std::move(target)),
        entries_(std::move(entries)), p_(p), cost_(cost) {}
  AtomicMeasure source_;
  AtomicMeasure target_;
  std::vector<PlanEntry> entries_;
  double p_;
  double cost_;
};

// Exact optimal plan by network simplex on the dense bipartite graph.
// Deterministic: the measure pair is ordered canonically before solving,
// weights are scaled to a perturbed integer grid (which makes every basis
// non-degenerate, so Dantzig pivoting with lowest-index ties terminates),
// and entries come out sorted by (i, j). Supports are capped at 1022
// atoms per side; tiny perturbation residues (mass < 1e-11) are filtered
// before the plan invariants are checked.
TransportPlan solve_wp(const AtomicMeasure& mu, const AtomicMeasure& nu,
                       double p);

// W_p via the quantile integral int_0^1 |G_mu^{-1} - G_nu^{-1}|^p dm on a
// merged breakpoint sweep. Ray/interval measures only.
double wp_1d(const AtomicMeasure& mu, const AtomicMeasure& nu, double p);

// Cyclical monotonicity: sum d(x_i, y_i)^p <= sum d(x_i, y_{sigma(i)})^p
// for every subset of support pairs up to max_cycle and every cyclic
// sigma; equivalently, the pair-exchange graph has no negative cycle of
// length <= max_cycle. Checked by a shortest-walk DP, slack 1e-9.
struct MonotonicityReport {
  bool monotone;
  std::vector<std::size_t> violating_cycle;  // entry indices, empty if ok
  double violation;                          // most negative cycle weight
};

MonotonicityReport is_cyclically_monotone(const TransportPlan& plan,
                                          std::size_t max_cycle = 5,
                                          double slack = 1e-9);

// One-dimensional adjacency: the CDFs agree outside some [a, b) and both
// are constant inside, i.e. the measures differ only in the masses of the
// two bracket atoms a and b with nothing in between.
bool adjacency_test(const AtomicMeasure& mu, const AtomicMeasure& nu);

// Distance from mu to the set of measures supported on the fiber at
// height t (cylinder) or latitude t (suspension), together with the
// minimizer T_t # mu. The projection plan is optimal because the fiber
// coordinate contracts to a 1-D problem whose cost it attains.
struct FiberDistanceResult {
  double wp;
  AtomicMeasure minimizer;
};

FiberDistanceResult distance_to_fiber(const AtomicMeasure& mu, double t,
                                      double p);

}  // namespace otlab
