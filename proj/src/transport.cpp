#include "otlab/transport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "otlab/geodesic.hpp"
#include "otlab/space.hpp"

namespace otlab {

namespace {

constexpr double kMarginalTol = 1e-10;
constexpr double kDustMass = 1e-11;  // perturbation residue ceiling
constexpr std::size_t kSupportCap = 1022;

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
    throw input_error("transport exponent p must be finite and >= 1, got " +
                      std::to_string(p));
}

// Total order on measures over one space: size, then atom positions, then
// weights. Solving the lexicographically smaller side as the source makes
// solve_wp(mu, nu) and solve_wp(nu, mu) bit-identical up to transpose.
bool measure_before(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    int c = compare_points(a.atoms()[k].point, b.atoms()[k].point);
    if (c != 0) return c < 0;
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.atoms()[k].weight != b.atoms()[k].weight)
      return a.atoms()[k].weight < b.atoms()[k].weight;
  }
  return false;  // equal, order irrelevant
}

// Largest-remainder rounding of the weights to integers summing to `scale`,
// with every atom keeping at least one unit so no support point vanishes.
std::vector<std::int64_t> integerize(const std::vector<Atom>& atoms,
                                     std::int64_t scale) {
  const std::size_t n = atoms.size();
  std::vector<std::int64_t> units(n);
  std::vector<std::pair<double, std::size_t>> rem(n);
  std::int64_t used = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double exact = atoms[k].weight * static_cast<double>(scale);
    double fl = std::floor(exact);
    units[k] = static_cast<std::int64_t>(fl);
    rem[k] = {exact - fl, k};
    used += units[k];
  }
  // Hand the leftover units to the largest remainders (index breaks ties).
  std::sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  for (std::size_t k = 0; used < scale; ++k, ++used) ++units[rem[k % n].second];
  for (std::size_t k = 0; used > scale; ++k) {
    std::size_t idx = rem[n - 1 - (k % n)].second;
    if (units[idx] > 0) { --units[idx]; --used; }
  }
  // Atoms below grid resolution still get one unit, taken from the largest.
  for (std::size_t k = 0; k < n; ++k) {
    if (units[k] == 0) {
      std::size_t big = static_cast<std::size_t>(
          std::max_element(units.begin(), units.end()) - units.begin());
      --units[big];
      ++units[k];
    }
  }
  return units;
}

struct BasicArc {
  std::size_t i;       // source node
  std::size_t j;       // sink node (column index, not offset)
  std::int64_t flow;
};

// Dense transportation simplex over perturbed integer data. Supplies are
// K a_i + 1 and demands K b_j (+ m on the last column) with K > m, so no
// proper subset of rows can tie a subset of columns: every basis in the
// northwest-corner/Dantzig walk is non-degenerate and the pivot count is
// finite without anti-cycling bookkeeping. A Bland fallback guards the
// pathological case anyway.
std::vector<BasicArc> solve_transportation(const std::vector<std::int64_t>& a,
                                           const std::vector<std::int64_t>& b,
                                           const std::vector<double>& cost,
                                           std::size_t m, std::size_t n) {
  std::vector<BasicArc> basis;
  basis.reserve(m + n - 1);
  {
    std::vector<std::int64_t> ra = a, rb = b;
    std::size_t i = 0, j = 0;
    for (;;) {
      std::int64_t f = std::min(ra[i], rb[j]);
      basis.push_back({i, j, f});
      ra[i] -= f;
      rb[j] -= f;
      if (i == m - 1 && j == n - 1) break;
      if (ra[i] == 0 && i < m - 1)
        ++i;
      else
        ++j;
    }
  }

  double max_cost = 0.0;
  for (double c : cost) max_cost = std::max(max_cost, c);
  const double tau = 1e-12 * (1.0 + max_cost);

  const std::size_t nodes = m + n;
  std::vector<double> pot(nodes);
  std::vector<std::size_t> parent(nodes), parent_arc(nodes), order(nodes);
  std::vector<std::vector<std::size_t>> adj(nodes);
  std::vector<char> seen(nodes);

  std::size_t degenerate_streak = 0;
  bool bland = false;
  const std::size_t pivot_cap = 2'000'000;

  for (std::size_t pivot = 0;; ++pivot) {
    if (pivot > pivot_cap)
      throw not_computable("transport simplex exceeded its pivot budget");

    // Potentials from the current spanning tree, rooted at source 0.
    for (auto& l : adj) l.clear();
    for (std::size_t e = 0; e < basis.size(); ++e) {
      adj[basis[e].i].push_back(e);
      adj[m + basis[e].j].push_back(e);
    }
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t head = 0, tail = 0;
    order[tail++] = 0;
    seen[0] = 1;
    pot[0] = 0.0;
    parent[0] = 0;
    while (head < tail) {
      std::size_t v = order[head++];
      for (std::size_t e : adj[v]) {
        std::size_t src = basis[e].i, snk = m + basis[e].j;
        std::size_t w = (v == src) ? snk : src;
        if (seen[w]) continue;
        seen[w] = 1;
        parent[w] = v;
        parent_arc[w] = e;
        // pot[src] + pot[snk] = c on every basic arc, whichever end is new.
        pot[w] = cost[basis[e].i * n + basis[e].j] - pot[v];
        order[tail++] = w;
      }
    }
    if (tail != nodes)
      throw not_computable("transport basis lost connectivity");

    // Entering arc: most negative reduced cost (Dantzig), or the first one
    // in index order once the Bland fallback is armed.
    std::size_t ei = 0, ej = 0;
    double best = -tau;
    bool found = false;
    for (std::size_t i = 0; i < m && !(bland && found); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double rc = cost[i * n + j] - pot[i] - pot[m + j];
        if (rc < best) {
          best = rc;
          ei = i;
          ej = j;
          found = true;
          if (bland) break;
        }
      }
    }
    if (!found) return basis;

    // Cycle = entering arc plus the tree path between its endpoints.
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t v = ei;; v = parent[v]) {
      seen[v] = 1;
      if (v == parent[v]) break;
    }
    std::size_t lca = m + ej;
    while (!seen[lca]) lca = parent[lca];

    // Arcs alternate +theta / -theta around the oriented loop
    // ei -> (m+ej) -> ... -> lca -> ... -> ei; an arc traversed from its
    // sink endpoint toward its source loses flow.
    std::vector<std::pair<std::size_t, int>> loop;  // (basic index, sign)
    for (std::size_t v = m + ej; v != lca; v = parent[v]) {
      std::size_t e = parent_arc[v];
      // Traversal v -> parent(v): leaving a sink means the arc points
      // against the walk (sign -1); leaving a source means it points with
      // it (+1).
      loop.emplace_back(e, v >= m ? -1 : +1);
    }
    std::vector<std::pair<std::size_t, int>> down;
    for (std::size_t v = ei; v != lca; v = parent[v]) {
      std::size_t e = parent_arc[v];
      // Reversed afterwards; walking parent(v) -> v flips the sign rule.
      down.emplace_back(e, v >= m ? +1 : -1);
    }
    loop.insert(loop.end(), down.rbegin(), down.rend());

    std::int64_t theta = std::numeric_limits<std::int64_t>::max();
    std::size_t leave = basis.size();
    for (const auto& [e, sign] : loop) {
      if (sign < 0 && basis[e].flow < theta) {
        theta = basis[e].flow;
        leave = e;
      } else if (sign < 0 && basis[e].flow == theta && leave < basis.size()) {
        const BasicArc& cand = basis[e];
        const BasicArc& cur = basis[leave];
        if (cand.i < cur.i || (cand.i == cur.i && cand.j < cur.j)) leave = e;
      }
    }
    if (leave == basis.size())
      throw not_computable("transport pivot found no leaving arc");

    for (const auto& [e, sign] : loop) basis[e].flow += sign * theta;
    basis[leave] = {ei, ej, theta};

    if (theta == 0) {
      if (++degenerate_streak >= 64) bland = true;
    } else {
      degenerate_streak = 0;
    }
  }
}

// Flows on a spanning-tree basis are determined by the marginals alone: a
// leaf's single live arc must carry exactly the leaf's remaining mass. Dual
// feasibility never depends on supplies, so the basis stays optimal for the
// exact weights as long as every peeled flow is nonnegative; re-deriving the
// flows this way sheds the 2^-40 integerization noise that would otherwise
// reach the cost multiplied by d^p. Returns empty when a flow comes out
// negative beyond fp noise, i.e. the quantization crossed a degeneracy and
// the tree is not primal feasible for the exact weights.
std::vector<double> peel_true_flows(const std::vector<BasicArc>& basis,
                                    const std::vector<Atom>& mu_atoms,
                                    const std::vector<Atom>& nu_atoms) {
  const std::size_t m = mu_atoms.size(), n = nu_atoms.size();
  const std::size_t E = basis.size();
  std::vector<std::vector<std::size_t>> inc(m + n);
  for (std::size_t e = 0; e < E; ++e) {
    inc[basis[e].i].push_back(e);
    inc[m + basis[e].j].push_back(e);
  }
  std::vector<std::size_t> degree(m + n);
  std::vector<double> rem(m + n);
  std::vector<std::size_t> leaves;
  for (std::size_t v = 0; v < m + n; ++v) {
    degree[v] = inc[v].size();
    rem[v] = v < m ? mu_atoms[v].weight : nu_atoms[v - m].weight;
    if (degree[v] == 1) leaves.push_back(v);
  }

  std::vector<double> flow(E, 0.0);
  std::vector<char> arc_done(E, 0);
  std::size_t peeled = 0;
  while (!leaves.empty()) {
    std::size_t v = leaves.back();
    leaves.pop_back();
    std::size_t e = E;
    for (std::size_t cand : inc[v])
      if (!arc_done[cand]) { e = cand; break; }
    if (e == E) continue;  // root of the peel, nothing left to carry
    flow[e] = rem[v];
    arc_done[e] = 1;
    ++peeled;
    std::size_t other = v < m ? m + basis[e].j : basis[e].i;
    rem[other] -= rem[v];
    rem[v] = 0.0;
    --degree[v];
    if (--degree[other] == 1) leaves.push_back(other);
  }
  if (peeled != E) return {};  // not a tree; leave the integer flows alone

  double clamped = 0.0;
  for (double& f : flow)
    if (f < 0.0) {
      clamped -= f;
      f = 0.0;
    }
  if (clamped > 1e-12) return {};
  return flow;
}

// Fiber coordinate of one atom: the height on a cylinder, the latitude on
// a suspension (poles sit at 0 and pi).
double fiber_coordinate(const SpaceDescriptor& space, const Point& pt) {
  if (space.is_qproduct()) return pt.as_pair().right->as_scalar();
  const auto& s = pt.as_susp();
  if (s.base != nullptr) return s.angle;
  return s.angle;  // poles already carry 0 or pi
}

}  // namespace

// ---------------------------------------------------------------------------
// TransportPlan
// ---------------------------------------------------------------------------

TransportPlan TransportPlan::make(AtomicMeasure source, AtomicMeasure target,
                                  std::vector<PlanEntry> entries, double p) {
  check_p(p);
  if (!spaces_equal(*source.space(), *target.space()))
    throw input_error("transport plan endpoints live in different spaces");
  const std::size_t m = source.size(), n = target.size();
  std::vector<double> row(m, 0.0), col(n, 0.0);
  for (const auto& e : entries) {
    if (e.i >= m || e.j >= n)
      throw input_error("transport plan entry indexes outside the supports");
    if (!(e.mass > 0.0) || !std::isfinite(e.mass))
      throw input_error("transport plan masses must be positive and finite");
    row[e.i] += e.mass;
    col[e.j] += e.mass;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (std::fabs(row[i] - source.atoms()[i].weight) > kMarginalTol)
      throw input_error("transport plan row sums do not match the source");
  for (std::size_t j = 0; j < n; ++j)
    if (std::fabs(col[j] - target.atoms()[j].weight) > kMarginalTol)
      throw input_error("transport plan column sums do not match the target");

  std::sort(entries.begin(), entries.end(),
            [](const PlanEntry& a, const PlanEntry& b) {
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });

  double cost = 0.0;
  for (const auto& e : entries) {
    double d = distance(*source.space(), source.atoms()[e.i].point,
                        target.atoms()[e.j].point);
    cost += e.mass * pow_p(d, p);
  }
  return TransportPlan(std::move(source), std::move(target),
                       std::move(entries), p, cost);
}

double TransportPlan::wp() const {
  if (entries_.size() == 1)
    return distance(*source_.space(), source_.atoms()[entries_[0].i].point,
                    target_.atoms()[entries_[0].j].point);
  return root_p(cost_, p_);
}

// ---------------------------------------------------------------------------
// solve_wp
// ---------------------------------------------------------------------------

TransportPlan solve_wp(const AtomicMeasure& mu, const AtomicMeasure& nu,
                       double p) {
  check_p(p);
  if (!spaces_equal(*mu.space(), *nu.space()))
    throw input_error("cannot transport between different spaces");
  if (mu.size() > kSupportCap || nu.size() > kSupportCap)
    throw input_error("transport supports are capped at 1022 atoms per side");

  // Solve the canonically ordered pair, then transpose if needed, so the
  // two argument orders return mirror-identical plans.
  if (measure_before(nu, mu)) {
    TransportPlan t = solve_wp(nu, mu, p);
    std::vector<PlanEntry> entries;
    entries.reserve(t.entries().size());
    for (const auto& e : t.entries()) entries.push_back({e.j, e.i, e.mass});
    return TransportPlan::make(mu, nu, std::move(entries), p);
  }

  const std::size_t m = mu.size(), n = nu.size();

  // A Dirac on either side forces the product plan; exact masses.
  if (m == 1 || n == 1) {
    std::vector<PlanEntry> entries;
    entries.reserve(std::max(m, n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        entries.push_back({i, j, mu.atoms()[i].weight * nu.atoms()[j].weight});
    return TransportPlan::make(mu, nu, std::move(entries), p);
  }

  std::vector<double> cost(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i * n + j] = pow_p(
          distance(*mu.space(), mu.atoms()[i].point, nu.atoms()[j].point), p);

  const std::int64_t scale = std::int64_t{1} << 40;
  std::vector<std::int64_t> a = integerize(mu.atoms(), scale);
  std::vector<std::int64_t> b = integerize(nu.atoms(), scale);

  // Charnes perturbation: K > m keeps every partial supply sum off every
  // partial demand sum, so the simplex never sees a degenerate basis.
  const std::int64_t K =
      static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(m) + 2));
  for (auto& v : a) v = K * v + 1;
  for (auto& v : b) v = K * v;
  b[n - 1] += static_cast<std::int64_t>(m);

  std::vector<BasicArc> basis = solve_transportation(a, b, cost, m, n);

  std::vector<PlanEntry> entries;
  entries.reserve(basis.size());
  std::vector<double> exact = peel_true_flows(basis, mu.atoms(), nu.atoms());
  if (!exact.empty()) {
    for (std::size_t e = 0; e < basis.size(); ++e) {
      if (exact[e] < kDustMass) continue;  // degenerate tie, not real mass
      entries.push_back({basis[e].i, basis[e].j, exact[e]});
    }
  } else {
    const double total = static_cast<double>(K) * static_cast<double>(scale) +
                         static_cast<double>(m);
    for (const auto& arc : basis) {
      double mass = static_cast<double>(arc.flow) / total;
      if (mass < kDustMass) continue;  // perturbation residue, not real mass
      entries.push_back({arc.i, arc.j, mass});
    }
  }
  return TransportPlan::make(mu, nu, std::move(entries), p);
}

// ---------------------------------------------------------------------------
// wp_1d
// ---------------------------------------------------------------------------

double wp_1d(const AtomicMeasure& mu, const AtomicMeasure& nu, double p) {
  check_p(p);
  if (!spaces_equal(*mu.space(), *nu.space()))
    throw input_error("cannot transport between different spaces");
  if (!mu.space()->is_one_dimensional())
    throw input_error("the quantile route needs a ray or interval space");

  QuantileFunction qmu = to_quantile(mu);
  QuantileFunction qnu = to_quantile(nu);

  double cost = 0.0;
  double prev = 0.0;
  std::size_t i = 0, j = 0;
  double first_dist = -1.0;
  bool single_dist = true;
  while (prev < 1.0) {
    double next = std::min(qmu.cum[i], qnu.cum[j]);
    double seg = next - prev;
    if (seg > 0.0) {
      double d = std::fabs(qmu.value[i] - qnu.value[j]);
      cost += seg * pow_p(d, p);
      if (first_dist < 0.0)
        first_dist = d;
      else if (d != first_dist)
        single_dist = false;
    }
    if (qmu.cum[i] == next && i + 1 < qmu.cum.size()) ++i;
    if (qnu.cum[j] == next && j + 1 < qnu.cum.size()) ++j;
    if (next == prev && qmu.cum[i] <= prev && qnu.cum[j] <= prev) break;
    prev = next;
  }
  if (single_dist && first_dist >= 0.0) return first_dist;
  return root_p(cost, p);
}

// ---------------------------------------------------------------------------
// Cyclical monotonicity
// ---------------------------------------------------------------------------

MonotonicityReport is_cyclically_monotone(const TransportPlan& plan,
                                          std::size_t max_cycle,
                                          double slack) {
  const auto& entries = plan.entries();
  const std::size_t E = entries.size();
  if (E <= 1 || max_cycle < 2) return {true, {}, 0.0};

  const SpaceDescriptor& space = *plan.source().space();
  const auto& src = plan.source().atoms();
  const auto& tgt = plan.target().atoms();

  // w(a -> b): marginal cost of rerouting a's mass to b's target.
  std::vector<double> w(E * E);
  for (std::size_t a = 0; a < E; ++a) {
    const Point& xa = src[entries[a].i].point;
    double own = pow_p(distance(space, xa, tgt[entries[a].j].point), plan.p());
    for (std::size_t b = 0; b < E; ++b)
      w[a * E + b] =
          pow_p(distance(space, xa, tgt[entries[b].j].point), plan.p()) - own;
  }

  // dist[k][a][b] = cheapest k-edge walk a -> b; a negative diagonal entry
  // at any k <= max_cycle is exactly a violating exchange cycle (a cheapest
  // closed walk decomposes into simple cycles, one of which must be
  // negative).
  std::vector<double> dist = w;
  std::vector<std::vector<std::size_t>> via(
      max_cycle + 1, std::vector<std::size_t>(E * E, E));
  for (std::size_t k = 2; k <= max_cycle; ++k) {
    std::vector<double> next(E * E, std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < E; ++a)
      for (std::size_t c = 0; c < E; ++c) {
        double base = dist[a * E + c];
        if (!std::isfinite(base)) continue;
        for (std::size_t b = 0; b < E; ++b) {
          double cand = base + w[c * E + b];
          if (cand < next[a * E + b]) {
            next[a * E + b] = cand;
            via[k][a * E + b] = c;
          }
        }
      }
    dist.swap(next);
    for (std::size_t a = 0; a < E; ++a) {
      if (dist[a * E + a] < -slack) {
        // Walk the predecessor chain back from (k, a, a).
        std::vector<std::size_t> cycle(k);
        std::size_t b = a;
        for (std::size_t step = k; step >= 2; --step) {
          std::size_t c = via[step][a * E + b];
          cycle[step - 1] = b;
          b = c;
        }
        cycle[0] = a;
        return {false, std::move(cycle), dist[a * E + a]};
      }
    }
  }
  return {true, {}, 0.0};
}

// ---------------------------------------------------------------------------
// Adjacency
// ---------------------------------------------------------------------------

bool adjacency_test(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (!spaces_equal(*mu.space(), *nu.space()))
    throw input_error("adjacency compares measures on one space");
  if (!mu.space()->is_one_dimensional())
    throw input_error("adjacency is defined for ray or interval measures");

  // Merge the two sorted supports into (value, w_mu, w_nu) rows.
  struct Row {
    double value;
    double wm;
    double wn;
  };
  std::vector<Row> rows;
  const auto& am = mu.atoms();
  const auto& an = nu.atoms();
  std::size_t i = 0, j = 0;
  while (i < am.size() || j < an.size()) {
    if (i < am.size() && j < an.size() &&
        points_equal(am[i].point, an[j].point)) {
      rows.push_back({am[i].point.as_scalar(), am[i].weight, an[j].weight});
      ++i;
      ++j;
    } else if (j == an.size() ||
               (i < am.size() &&
                compare_points(am[i].point, an[j].point) < 0)) {
      rows.push_back({am[i].point.as_scalar(), am[i].weight, 0.0});
      ++i;
    } else {
      rows.push_back({an[j].point.as_scalar(), 0.0, an[j].weight});
      ++j;
    }
  }

  std::vector<std::size_t> diffs;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (std::fabs(rows[k].wm - rows[k].wn) > 1e-12) diffs.push_back(k);

  if (diffs.empty()) return true;  // equal measures: empty bracket
  if (diffs.size() != 2) return false;
  // The CDFs must be constant strictly inside (a, b): no support point of
  // either measure between the two differing atoms.
  return diffs[1] == diffs[0] + 1;
}

// ---------------------------------------------------------------------------
// distance_to_fiber
// ---------------------------------------------------------------------------

FiberDistanceResult distance_to_fiber(const AtomicMeasure& mu, double t,
                                      double p) {
  check_p(p);
  const SpaceDescriptor& space = *mu.space();
  if (!space.is_qproduct() && !space.is_suspension())
    throw input_error("fiber distance needs a cylinder or suspension");
  if (space.is_qproduct() && !space.as_qproduct().right->is_one_dimensional())
    throw input_error("fiber distance needs a one-dimensional height factor");

  // In the fiber coordinate the problem contracts to moving every atom
  // straight to level t; the projection cost is a lower bound for any
  // coupling with a fiber measure and T_t attains it.
  double cost = 0.0;
  double first_dist = -1.0;
  bool single_dist = true;
  for (const auto& atom : mu.atoms()) {
    double d = std::fabs(fiber_coordinate(space, atom.point) - t);
    cost += atom.weight * pow_p(d, p);
    if (first_dist < 0.0)
      first_dist = d;
    else if (d != first_dist)
      single_dist = false;
  }

  std::optional<Point> pole_base;
  if (space.is_suspension()) {
    for (const auto& atom : mu.atoms())
      if (atom.point.as_susp().base != nullptr) {
        pole_base = *atom.point.as_susp().base;
        break;
      }
    if (!pole_base) pole_base = canonical_base_point(*space.as_suspension().base);
  }

  AtomicMeasure minimizer = push_forward(
      mu,
      [&](const Point& pt) { return fiber_projection(space, t, pt, pole_base); },
      mu.space());

  double wp = (single_dist && first_dist >= 0.0) ? first_dist : root_p(cost, p);
  return {wp, std::move(minimizer)};
}

}  // namespace otlab
