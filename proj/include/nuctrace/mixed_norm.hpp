#pragma once

// Weighted mixed norms: the iterated L^{p_1},...,L^{p_n} quadrature norm with
// a weight, exponent duality and the bilinear pairing used by traces.

#include <vector>

#include "nuctrace/grid.hpp"

namespace nuctrace {

/// Exponents P = (p_1,...,p_n), 1 <= p_i < infinity.
class ExponentTuple {
 public:
  explicit ExponentTuple(std::vector<Real> entries);
  ExponentTuple(std::initializer_list<Real> entries)
      : ExponentTuple(std::vector<Real>(entries)) {}

  const std::vector<Real>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  Real operator[](int i) const { return entries_[static_cast<size_t>(i)]; }

 private:
  std::vector<Real> entries_;
};

/// Entrywise conjugate exponents; p'_i = infinity where p_i = 1. Norms with
/// infinite entries take the max over nodes along that axis (the essential
/// sup on a finite grid).
class DualExponentTuple {
 public:
  explicit DualExponentTuple(std::vector<Real> entries);

  const std::vector<Real>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  Real operator[](int i) const { return entries_[static_cast<size_t>(i)]; }

 private:
  std::vector<Real> entries_;
};

DualExponentTuple dual_exponents(const ExponentTuple& P);

/// Where the weight enters the iterated norm.
///   kPointwise: unweighted mixed norm of f*w (the time-frequency usage).
///   kDensity:   w multiplies the measure once, inside the innermost
///               integral (the iterated-integral display of the norm).
/// The two coincide for P = (1,...,1) and for w == 1.
enum class WeightConvention { kPointwise, kDensity };

Real mixed_norm(const SampledFunction& f, const ExponentTuple& P, const WeightFunction& w,
                WeightConvention convention = WeightConvention::kPointwise);

/// Dual-space norm; pointwise convention only (a density placement is not
/// defined for infinite inner exponents).
Real mixed_norm(const SampledFunction& f, const DualExponentTuple& P, const WeightFunction& w);

/// Bilinear pairing integral(f * h); no conjugation, matching the trace
/// pairing Tr(T) = sum_n integral(g_n h_n).
Complex dual_pairing(const SampledFunction& f, const SampledFunction& h);

/// Per-box mixed norms of the box indicators, w_P(box) = ||1_box||_{L^P_w}
/// (density convention, the iterated-integral display). On a finite grid all
/// values are finite; the ledger records them.
struct SigmaFiniteLedger {
  bool sigma_finite = false;
  RVector box_norms;
};

SigmaFiniteLedger sigma_finite_ledger(const GridPtr& grid, const WeightFunction& w,
                                      const ExponentTuple& P, const std::vector<Box>& partition);

/// Conditional expectation onto the box partition. Requires w constant on
/// every box; the projection is then a norm-one map for every P (per-box
/// Jensen plus Minkowski), which is what the finite-rank contraction tests
/// exercise.
SampledFunction map_projection(const SampledFunction& f, const std::vector<Box>& partition,
                               const WeightFunction& w);

}  // namespace nuctrace
