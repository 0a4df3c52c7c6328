#include "otlab/measure.hpp"

#include <algorithm>
#include <cmath>

namespace otlab {

namespace {

// Merge colliding points (index/pole exact, continuous within 1e-12),
// drop nothing, and sort canonically so equal measures compare equal.
std::vector<Atom> canonicalize(const SpaceDescriptor& space,
                               std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    validate_point(space, a.point);
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw input_error("atom weights must be strictly positive");
  }
  std::vector<Atom> merged;
  for (Atom& a : atoms) {
    bool found = false;
    for (Atom& m : merged) {
      if (points_equal(m.point, a.point)) {
        m.weight += a.weight;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(a));
  }
  std::sort(merged.begin(), merged.end(), [](const Atom& a, const Atom& b) {
    return compare_points(a.point, b.point) < 0;
  });
  return merged;
}

}  // namespace

AtomicMeasure AtomicMeasure::make(SpacePtr space, std::vector<Atom> atoms,
                                  double sum_tol) {
  if (!space) throw input_error("measure needs a space");
  if (atoms.empty()) throw input_error("measure needs at least one atom");
  std::vector<Atom> canon = canonicalize(*space, std::move(atoms));
  double total = 0.0;
  for (const Atom& a : canon) total += a.weight;
  if (std::fabs(total - 1.0) > sum_tol)
    throw input_error("atom weights must sum to 1");
  for (Atom& a : canon) a.weight /= total;
  return AtomicMeasure(std::move(space), std::move(canon));
}

AtomicMeasure AtomicMeasure::normalized(SpacePtr space,
                                        std::vector<Atom> atoms) {
  if (!space) throw input_error("measure needs a space");
  if (atoms.empty()) throw input_error("measure needs at least one atom");
  std::vector<Atom> canon = canonicalize(*space, std::move(atoms));
  double total = 0.0;
  for (const Atom& a : canon) total += a.weight;
  for (Atom& a : canon) a.weight /= total;
  return AtomicMeasure(std::move(space), std::move(canon));
}

AtomicMeasure AtomicMeasure::dirac(SpacePtr space, Point x) {
  return make(std::move(space), {{std::move(x), 1.0}});
}

AtomicMeasure push_forward(const AtomicMeasure& mu,
                           const std::function<Point(const Point&)>& phi,
                           SpacePtr target) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const Atom& a : mu.atoms()) atoms.push_back({phi(a.point), a.weight});
  // Weights ride along unchanged; normalized() only merges collisions
  // because the total is already exactly 1.
  return AtomicMeasure::normalized(std::move(target), std::move(atoms));
}

AtomicMeasure mixture(
    const std::vector<std::pair<double, AtomicMeasure>>& parts) {
  if (parts.empty()) throw input_error("mixture needs at least one part");
  double total = 0.0;
  for (const auto& [c, m] : parts) {
    if (c < 0.0) throw input_error("mixture coefficients must be >= 0");
    total += c;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw input_error("mixture coefficients must sum to 1");
  const SpacePtr& space = parts.front().second.space();
  std::vector<Atom> atoms;
  for (const auto& [c, m] : parts) {
    if (!spaces_equal(*m.space(), *space))
      throw input_error("mixture parts must share one space");
    if (c == 0.0) continue;
    for (const Atom& a : m.atoms()) atoms.push_back({a.point, c * a.weight});
  }
  return AtomicMeasure::normalized(space, std::move(atoms));
}

std::pair<AtomicMeasure, double> restrict_normalized(
    const AtomicMeasure& mu, const std::function<bool(const Point&)>& pred) {
  std::vector<Atom> atoms;
  double mass = 0.0;
  for (const Atom& a : mu.atoms()) {
    if (pred(a.point)) {
      atoms.push_back(a);
      mass += a.weight;
    }
  }
  if (atoms.empty())
    throw input_error("restriction retains no mass");
  return {AtomicMeasure::normalized(mu.space(), std::move(atoms)), mass};
}

std::pair<AtomicMeasure, AtomicMeasure> marginals(const AtomicMeasure& mu) {
  if (!mu.space()->is_qproduct())
    throw input_error("marginals need a q-product measure");
  const auto& qp = mu.space()->as_qproduct();
  std::vector<Atom> left, right;
  for (const Atom& a : mu.atoms()) {
    left.push_back({*a.point.as_pair().left, a.weight});
    right.push_back({*a.point.as_pair().right, a.weight});
  }
  return {AtomicMeasure::normalized(qp.left, std::move(left)),
          AtomicMeasure::normalized(qp.right, std::move(right))};
}

bool measures_equal(const AtomicMeasure& a, const AtomicMeasure& b,
                    double weight_tol) {
  if (!spaces_equal(*a.space(), *b.space())) return false;
  if (a.size() != b.size()) return false;
  // Atoms are canonically sorted, so one aligned pass suffices.
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!points_equal(a.atoms()[k].point, b.atoms()[k].point)) return false;
    if (std::fabs(a.atoms()[k].weight - b.atoms()[k].weight) > weight_tol)
      return false;
  }
  return true;
}

double tv_distance(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (!spaces_equal(*a.space(), *b.space()))
    throw input_error("total variation needs a shared space");
  // Half l1 over the merged support.
  double l1 = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const Atom& x : a.atoms()) {
    double wb = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (!used[k] && points_equal(x.point, b.atoms()[k].point)) {
        wb = b.atoms()[k].weight;
        used[k] = true;
        break;
      }
    }
    l1 += std::fabs(x.weight - wb);
  }
  for (std::size_t k = 0; k < b.size(); ++k)
    if (!used[k]) l1 += b.atoms()[k].weight;
  return l1 / 2.0;
}

// ---------------------------------------------------------------------------
// Quantile representation
// ---------------------------------------------------------------------------

double QuantileFunction::operator()(double m) const {
  if (!(m > 0.0) || m > 1.0)
    throw input_error("quantile argument must lie in (0, 1]");
  // First step whose right endpoint reaches m (left-continuous inverse).
  auto it = std::lower_bound(cum.begin(), cum.end(), m);
  if (it == cum.end()) it = std::prev(cum.end());
  return value[static_cast<std::size_t>(it - cum.begin())];
}

QuantileFunction to_quantile(const AtomicMeasure& mu) {
  if (!mu.space()->is_one_dimensional())
    throw input_error("quantile representation needs a ray or interval");
  // Atoms are already sorted by scalar value.
  QuantileFunction qf;
  double c = 0.0;
  for (const Atom& a : mu.atoms()) {
    c += a.weight;
    qf.cum.push_back(c);
    qf.value.push_back(a.point.as_scalar());
  }
  qf.cum.back() = 1.0;  // the total is 1 by construction; pin it exactly
  return qf;
}

AtomicMeasure from_quantile(const QuantileFunction& qf, SpacePtr space) {
  if (qf.cum.size() != qf.value.size() || qf.cum.empty())
    throw input_error("malformed quantile function");
  std::vector<Atom> atoms;
  double prev = 0.0;
  for (std::size_t k = 0; k < qf.cum.size(); ++k) {
    double w = qf.cum[k] - prev;
    prev = qf.cum[k];
    if (w <= 0.0 && k + 1 < qf.cum.size())
      throw input_error("quantile breakpoints must increase");
    if (w > 0.0) atoms.push_back({Point::scalar(qf.value[k]), w});
  }
  return AtomicMeasure::normalized(std::move(space), std::move(atoms));
}

}  // namespace otlab
