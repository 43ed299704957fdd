#include "nuctrace/mixed_norm.hpp"

#include <cmath>

namespace nuctrace {

namespace {

void check_exponents(const std::vector<Real>& p, bool allow_infinite, const char* where) {
  if (p.empty()) throw std::invalid_argument(std::string(where) + ": empty exponent tuple");
  for (Real pi : p) {
    if (std::isnan(pi) || pi < 1.0)
      throw std::invalid_argument(std::string(where) + ": exponents must satisfy p >= 1");
    if (!allow_infinite && !std::isfinite(pi))
      throw std::invalid_argument(std::string(where) + ": exponents must be finite");
  }
}

// Iterated norm of a nonnegative node array: reduce axis 0 (innermost
// integral) first, then the next, so that axis order matches the exponent
// order p_1,...,p_n. density, when present, multiplies the measure in the
// innermost reduction only.
Real iterated_norm(RVector magnitudes, const ProductGrid& grid, const std::vector<Real>& p,
                   const RVector* density) {
  Eigen::Index rest = grid.size();
  RVector cur = std::move(magnitudes);
  for (int k = 0; k < grid.dim(); ++k) {
    const Axis& axis = grid.axis(k);
    const Eigen::Index nk = axis.size();
    rest /= nk;
    RVector next(rest);
    const Real pk = p[static_cast<size_t>(k)];
    if (std::isinf(pk)) {
      for (Eigen::Index r = 0; r < rest; ++r) {
        Real m = 0.0;
        for (Eigen::Index i = 0; i < nk; ++i) m = std::max(m, cur[i * rest + r]);
        next[r] = m;
      }
    } else {
      const RVector& qw = axis.quad_weights();
      for (Eigen::Index r = 0; r < rest; ++r) {
        Real s = 0.0;
        for (Eigen::Index i = 0; i < nk; ++i) {
          Real term = std::pow(cur[i * rest + r], pk) * qw[i];
          if (k == 0 && density != nullptr) term *= (*density)[i * rest + r];
          s += term;
        }
        next[r] = std::pow(s, 1.0 / pk);
      }
    }
    cur = std::move(next);
  }
  return cur[0];
}

Real mixed_norm_impl(const SampledFunction& f, const std::vector<Real>& p,
                     const WeightFunction& w, WeightConvention convention) {
  require_same_grid(f.grid(), w.grid(), "mixed_norm");
  const ProductGrid& grid = *f.grid();
  if (static_cast<int>(p.size()) != grid.dim())
    throw std::invalid_argument("mixed_norm: exponent tuple length must equal grid dimension");
  RVector mags = f.values().cwiseAbs();
  if (convention == WeightConvention::kPointwise) {
    mags.array() *= w.values().array();
    return iterated_norm(std::move(mags), grid, p, nullptr);
  }
  if (std::isinf(p[0]))
    throw std::invalid_argument("mixed_norm: density convention needs a finite inner exponent");
  return iterated_norm(std::move(mags), grid, p, &w.values());
}

}  // namespace

ExponentTuple::ExponentTuple(std::vector<Real> entries) : entries_(std::move(entries)) {
  check_exponents(entries_, false, "ExponentTuple");
}

DualExponentTuple::DualExponentTuple(std::vector<Real> entries) : entries_(std::move(entries)) {
  check_exponents(entries_, true, "DualExponentTuple");
}

DualExponentTuple dual_exponents(const ExponentTuple& P) {
  std::vector<Real> d(P.entries().size());
  for (size_t i = 0; i < d.size(); ++i) {
    const Real p = P.entries()[i];
    d[i] = (p == 1.0) ? kInfinity : p / (p - 1.0);
  }
  return DualExponentTuple(std::move(d));
}

Real mixed_norm(const SampledFunction& f, const ExponentTuple& P, const WeightFunction& w,
                WeightConvention convention) {
  return mixed_norm_impl(f, P.entries(), w, convention);
}

Real mixed_norm(const SampledFunction& f, const DualExponentTuple& P, const WeightFunction& w) {
  return mixed_norm_impl(f, P.entries(), w, WeightConvention::kPointwise);
}

Complex dual_pairing(const SampledFunction& f, const SampledFunction& h) {
  require_same_grid(f.grid(), h.grid(), "dual_pairing");
  return integrate(pointwise_product(f, h));
}

SigmaFiniteLedger sigma_finite_ledger(const GridPtr& grid, const WeightFunction& w,
                                      const ExponentTuple& P, const std::vector<Box>& partition) {
  SigmaFiniteLedger ledger;
  ledger.box_norms.resize(static_cast<Eigen::Index>(partition.size()));
  for (size_t b = 0; b < partition.size(); ++b) {
    const SampledFunction ind = SampledFunction::indicator(grid, partition[b]);
    ledger.box_norms[static_cast<Eigen::Index>(b)] =
        mixed_norm(ind, P, w, WeightConvention::kDensity);
  }
  ledger.sigma_finite = ledger.box_norms.allFinite();
  return ledger;
}

SampledFunction map_projection(const SampledFunction& f, const std::vector<Box>& partition,
                               const WeightFunction& w) {
  require_same_grid(f.grid(), w.grid(), "map_projection");
  if (!w.box_constant(*f.grid(), partition))
    throw std::invalid_argument(
        "map_projection: weight must be constant on each box (contraction not guaranteed)");
  return conditional_expectation(f, partition);
}

}  // namespace nuctrace
