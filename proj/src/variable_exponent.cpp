#include "nuctrace/variable_exponent.hpp"

#include <cmath>

namespace nuctrace {

namespace {

// rho(f/lambda) over the finite-exponent nodes.
Real scaled_modular(const CVector& f, const RVector& p, const RVector& qw, Real lambda) {
  Real s = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (std::isinf(p[i])) continue;
    const Real a = std::abs(f[i]) / lambda;
    if (a > 0.0) s += std::pow(a, p[i]) * qw[i];
  }
  return s;
}

Real sup_over_infinite_nodes(const CVector& f, const RVector& p) {
  Real m = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (std::isinf(p[i])) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace

VariableExponent::VariableExponent(GridPtr grid, RVector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("VariableExponent: null grid");
  if (values_.size() != grid_->size())
    throw std::invalid_argument("VariableExponent: value count must equal grid size");
  p_minus_ = kInfinity;
  p_plus_ = 1.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const Real p = values_[i];
    if (std::isnan(p) || p < 1.0)
      throw std::invalid_argument("VariableExponent: exponent values must satisfy p >= 1");
    p_minus_ = std::min(p_minus_, p);
    p_plus_ = std::max(p_plus_, p);
  }
}

VariableExponent VariableExponent::constant(GridPtr grid, Real p) {
  RVector v = RVector::Constant(grid->size(), p);
  return VariableExponent(std::move(grid), std::move(v));
}

VariableExponent VariableExponent::sample(GridPtr grid,
                                          const std::function<Real(const RVector&)>& p) {
  RVector v(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) v[i] = p(grid->node(i));
  return VariableExponent(std::move(grid), std::move(v));
}

bool VariableExponent::box_constant(const std::vector<Box>& partition) const {
  for (const Box& box : partition) {
    Real lo = kInfinity, hi = 1.0;
    for (Eigen::Index i : box.node_indices(*grid_)) {
      lo = std::min(lo, values_[i]);
      hi = std::max(hi, values_[i]);
    }
    if (std::isinf(hi)) {
      if (!std::isinf(lo)) return false;
    } else if (hi - lo > 1e-12 * hi) {
      return false;
    }
  }
  return true;
}

Real modular(const SampledFunction& f, const VariableExponent& p) {
  require_same_grid(f.grid(), p.grid(), "modular");
  if (!p.bounded()) throw std::invalid_argument("modular: exponent must be bounded");
  return scaled_modular(f.values(), p.values(), f.grid()->node_weights(), 1.0);
}

Real luxemburg_norm(const SampledFunction& f, const VariableExponent& p) {
  return luxemburg_norm_detailed(f, p).norm;
}

LuxemburgSolve luxemburg_norm_detailed(const SampledFunction& f, const VariableExponent& p) {
  require_same_grid(f.grid(), p.grid(), "luxemburg_norm");
  LuxemburgSolve solve;
  const CVector& v = f.values();
  const RVector& pe = p.values();
  const RVector& qw = f.grid()->node_weights();
  if (v.cwiseAbs().maxCoeff() == 0.0) return solve;

  const Real sup_inf = sup_over_infinite_nodes(v, pe);
  // feasible(lambda): rho over finite nodes <= 1 and sup over infinite nodes <= lambda
  const auto feasible = [&](Real lambda) {
    if (sup_inf > lambda) return false;
    return scaled_modular(v, pe, qw, lambda) <= 1.0;
  };

  // Geometric bracket expansion from an L^1-scale starting point.
  Real l1 = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) l1 += std::abs(v[i]) * qw[i];
  Real lambda0 = l1 / (1.0 + f.grid()->measure());
  if (!(lambda0 > 0.0)) lambda0 = v.cwiseAbs().maxCoeff();

  Real lo = lambda0, hi = lambda0;
  if (feasible(lambda0)) {
    while (lo > 1e-300 && feasible(lo * 0.5)) lo *= 0.5;
    lo *= 0.5;
  } else {
    while (hi < 1e300 && !feasible(hi * 2.0)) hi *= 2.0;
    hi *= 2.0;
  }

  solve.bracket_lo = lo;
  solve.bracket_hi = hi;

  // Log-scale bisection: the bracket ratio halves in log, so 1e-30..1e30
  // reaches 1e-12 relative width in under 60 steps.
  int iters = 0;
  while (hi - lo > 1e-12 * hi && iters < 200) {
    const Real mid = std::sqrt(lo * hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
    ++iters;
  }
  solve.bisection_iterations = iters;
  solve.norm = hi;
  return solve;
}

VariableExponent dual_exponent(const VariableExponent& p) {
  RVector d(p.values().size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Real pi = p.values()[i];
    if (pi == 1.0)
      d[i] = kInfinity;
    else if (std::isinf(pi))
      d[i] = 1.0;
    else
      d[i] = pi / (pi - 1.0);
  }
  return VariableExponent(p.grid(), std::move(d));
}

HoelderReport holder_check(const SampledFunction& f, const SampledFunction& g,
                           const VariableExponent& p) {
  require_same_grid(f.grid(), g.grid(), "holder_check");
  HoelderReport rep;
  rep.pairing_abs = std::abs(integrate(pointwise_product(f, g)));
  rep.norm_f = luxemburg_norm(f, p);
  rep.norm_g_dual = luxemburg_norm(g, dual_exponent(p));
  const Real denom = rep.norm_f * rep.norm_g_dual;
  rep.ratio = denom > 0.0 ? rep.pairing_abs / denom : 0.0;
  rep.ok = rep.ratio <= rep.bound * (1.0 + 1e-12);
  return rep;
}

SampledFunction map_projection_ve(const SampledFunction& f, const VariableExponent& p,
                                  const std::vector<Box>& partition) {
  require_same_grid(f.grid(), p.grid(), "map_projection_ve");
  if (!p.box_constant(partition))
    throw std::invalid_argument(
        "map_projection_ve: exponent must be constant on each box (contraction not guaranteed)");
  return conditional_expectation(f, partition);
}

}  // namespace nuctrace
