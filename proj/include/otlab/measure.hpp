#pragma once

// Finitely supported probability measures and the quantile representation
// of one-dimensional measures.

#include <functional>
#include <utility>
#include <vector>

#include "otlab/space.hpp"

namespace otlab {

struct Atom {
  Point point;
  double weight;
};

// Atoms are deduplicated on construction (exact equality for indices and
// poles, 1e-12 coordinate tolerance otherwise), sorted canonically, and
// renormalized by the exact weight sum. All weights stay strictly positive.
class AtomicMeasure {
 public:
  // Validates every point against the space and requires the weight sum to
  // be 1 within sum_tol before renormalizing (JSON ingestion passes 1e-9).
  static AtomicMeasure make(SpacePtr space, std::vector<Atom> atoms,
                            double sum_tol = 1e-12);
  // Renormalizes whatever positive total mass the atoms carry; used by
  // internal constructions (restrictions, mixtures of sub-measures).
  static AtomicMeasure normalized(SpacePtr space, std::vector<Atom> atoms);
  static AtomicMeasure dirac(SpacePtr space, Point x);

  const SpacePtr& space() const { return space_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_dirac() const { return atoms_.size() == 1; }

 private:
  AtomicMeasure(SpacePtr space, std::vector<Atom> atoms)
      : space_(std::move(space)), atoms_(std::move(atoms)) {}
  SpacePtr space_;
  std::vector<Atom> atoms_;
};

// phi must map into target; masses are carried over unchanged and images
// that collide are merged. Total mass is preserved exactly.
AtomicMeasure push_forward(const AtomicMeasure& mu,
                           const std::function<Point(const Point&)>& phi,
                           SpacePtr target);

// Convex combination; coefficients must sum to 1 within 1e-12 and all
// parts must live on the same space. Zero coefficients are dropped.
AtomicMeasure mixture(
    const std::vector<std::pair<double, AtomicMeasure>>& parts);

// Restriction to the atoms satisfying pred, renormalized; also reports the
// retained mass. Throws input_error when no mass survives.
std::pair<AtomicMeasure, double> restrict_normalized(
    const AtomicMeasure& mu, const std::function<bool(const Point&)>& pred);

// Marginals of a measure on a q-product.
std::pair<AtomicMeasure, AtomicMeasure> marginals(const AtomicMeasure& mu);

// Measure equality up to atom dedup tolerance and weight tolerance.
bool measures_equal(const AtomicMeasure& a, const AtomicMeasure& b,
                    double weight_tol = 1e-12);

// Total variation distance; for atomic probability measures this equals
// half the l1 distance between the weight vectors on the merged support.
double tv_distance(const AtomicMeasure& a, const AtomicMeasure& b);

// ---------------------------------------------------------------------------
// Quantile representation (ray / interval measures)
// ---------------------------------------------------------------------------

// Left-continuous inverse CDF as a step function on (0, 1]: value[k] on
// (cum[k-1], cum[k]], with cum strictly increasing to exactly 1 and value
// strictly increasing (atoms are distinct and sorted).
struct QuantileFunction {
  std::vector<double> cum;
  std::vector<double> value;

  // G^{-1}(m) for m in (0, 1]: the value on the step containing m.
  double operator()(double m) const;
};

QuantileFunction to_quantile(const AtomicMeasure& mu);
AtomicMeasure from_quantile(const QuantileFunction& qf, SpacePtr space);

}  // namespace otlab
