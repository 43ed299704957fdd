#pragma once

// Variable exponent Lebesgue space: modular, Luxemburg norm by monotone
// bisection, pointwise exponent duality and the projection witnesses.

#include <vector>

#include "nuctrace/grid.hpp"

namespace nuctrace {

/// Measurable exponent p(.) sampled on a grid, entries in [1, infinity].
/// Infinite entries arise only as duals of p(x) = 1; their norm contribution
/// is a sup over those nodes. p_plus() is finite iff no entry is infinite.
class VariableExponent {
 public:
  VariableExponent(GridPtr grid, RVector values);

  static VariableExponent constant(GridPtr grid, Real p);
  static VariableExponent sample(GridPtr grid, const std::function<Real(const RVector&)>& p);

  const GridPtr& grid() const { return grid_; }
  const RVector& values() const { return values_; }
  Real p_minus() const { return p_minus_; }
  Real p_plus() const { return p_plus_; }
  bool bounded() const { return std::isfinite(p_plus_); }

  bool box_constant(const std::vector<Box>& partition) const;

 private:
  GridPtr grid_;
  RVector values_;
  Real p_minus_ = 1.0;
  Real p_plus_ = 1.0;
};

/// rho_p(f) = integral |f(x)|^{p(x)} dmu. Requires a bounded exponent.
Real modular(const SampledFunction& f, const VariableExponent& p);

/// inf{lambda > 0 : rho_p(f/lambda) <= 1}, located by log-scale bisection
/// after geometric bracket expansion; relative tolerance 1e-12. Nodes with
/// p(x) = infinity contribute the feasibility constraint |f(x)| <= lambda.
Real luxemburg_norm(const SampledFunction& f, const VariableExponent& p);

struct LuxemburgSolve {
  Real norm = 0.0;
  int bisection_iterations = 0;
  Real bracket_lo = 0.0;  // initial bracket after geometric expansion
  Real bracket_hi = 0.0;
};

LuxemburgSolve luxemburg_norm_detailed(const SampledFunction& f, const VariableExponent& p);

/// Pointwise conjugate 1/p + 1/p' = 1; p' = infinity where p = 1.
VariableExponent dual_exponent(const VariableExponent& p);

struct HoelderReport {
  Real pairing_abs = 0.0;   // |integral f g|
  Real norm_f = 0.0;        // ||f||_{p(.)}
  Real norm_g_dual = 0.0;   // ||g||_{p'(.)}
  Real ratio = 0.0;         // pairing_abs / (norm_f * norm_g_dual)
  Real bound = 2.0;         // the variable-exponent Hoelder constant
  bool ok = false;
};

HoelderReport holder_check(const SampledFunction& f, const SampledFunction& g,
                           const VariableExponent& p);

/// Conditional expectation onto the partition; requires p(.) constant on
/// each box so the Luxemburg norm is non-increasing (per-box Jensen).
SampledFunction map_projection_ve(const SampledFunction& f, const VariableExponent& p,
                                  const std::vector<Box>& partition);

}  // namespace nuctrace
