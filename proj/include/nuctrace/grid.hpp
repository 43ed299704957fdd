#pragma once

// Discretized product measure spaces: axes with quadrature weights, boxes,
// weight functions and complex-valued sampled functions.
//
// Grids are finite by construction. sigma-finiteness of a (measure, weight,
// exponent) triple is represented by the per-box norm ledger computed in
// sigma_finite_ledger(), not by infinite unions.

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "nuctrace/types.hpp"

namespace nuctrace {

/// One factor of a product measure space: ordered sample nodes with strictly
/// positive quadrature weights. Uniform periodic axes carry equal weights
/// h = extent/n (the periodic trapezoid rule); uniform non-periodic axes
/// sample the half-open interval [a, b) with plain Riemann weights.
class Axis {
 public:
  Axis(RVector nodes, RVector quad_weights, bool periodic = false, Real extent = 0.0);

  /// Uniform nodes on the half-open interval [a, b), weight (b-a)/n each.
  static Axis uniform(Real a, Real b, int n);
  /// Uniform nodes j*extent/n on [0, extent), periodic, weight extent/n each.
  static Axis periodic_uniform(int n, Real extent = 1.0);

  const RVector& nodes() const { return nodes_; }
  const RVector& quad_weights() const { return weights_; }
  bool periodic() const { return periodic_; }
  Real extent() const { return extent_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  bool uniform_spacing() const { return uniform_; }
  /// Node spacing; only meaningful when uniform_spacing() holds.
  Real spacing() const { return spacing_; }

  friend bool operator==(const Axis& a, const Axis& b);

 private:
  RVector nodes_;
  RVector weights_;
  bool periodic_ = false;
  Real extent_ = 0.0;
  bool uniform_ = false;
  Real spacing_ = 0.0;
};

/// Product of axes; nodes are indexed row-major in axis order (axis 0
/// slowest, last axis contiguous). Node quadrature weights are the products
/// of the per-axis weights and are precomputed.
class ProductGrid {
 public:
  explicit ProductGrid(std::vector<Axis> axes);

  static std::shared_ptr<const ProductGrid> make(std::vector<Axis> axes) {
    return std::make_shared<const ProductGrid>(std::move(axes));
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  Eigen::Index size() const { return total_; }
  const Axis& axis(int k) const { return axes_.at(static_cast<size_t>(k)); }
  const std::vector<Axis>& axes() const { return axes_; }

  /// Product of per-axis quadrature weights for every node.
  const RVector& node_weights() const { return node_weights_; }
  /// Total measure of the grid, sum of node_weights.
  Real measure() const { return node_weights_.sum(); }

  /// Coordinates of the flat node index i.
  RVector node(Eigen::Index i) const;
  void unravel(Eigen::Index flat, std::span<int> out) const;
  Eigen::Index ravel(std::span<const int> idx) const;
  Eigen::Index stride(int k) const { return strides_[static_cast<size_t>(k)]; }

  friend bool operator==(const ProductGrid& a, const ProductGrid& b);

 private:
  std::vector<Axis> axes_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index total_ = 0;
  RVector node_weights_;
};

using GridPtr = std::shared_ptr<const ProductGrid>;

/// True when the two grids are the same object or structurally identical.
bool same_grid(const GridPtr& a, const GridPtr& b);
void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where);

/// Product of half-open per-axis index ranges.
struct Box {
  // ranges[k] = {lo, hi}, node indices lo..hi-1 along axis k
  std::vector<std::pair<int, int>> ranges;

  Eigen::Index node_count() const;
  /// Flat node indices of the box in row-major order.
  std::vector<Eigen::Index> node_indices(const ProductGrid& grid) const;
};

/// Splits the grid into counts[k] equal boxes per axis. counts[k] must divide
/// the axis length; boxes are returned row-major in block order and are
/// pairwise disjoint with union equal to the whole grid.
std::vector<Box> box_partition(const ProductGrid& grid, const std::vector<int>& counts);

/// Complex-valued function sampled on a grid. Values are stored row-major in
/// axis order and must all be finite.
class SampledFunction {
 public:
  SampledFunction(GridPtr grid, CVector values);

  static SampledFunction constant(GridPtr grid, Complex c);
  static SampledFunction zero(GridPtr grid) { return constant(std::move(grid), Complex(0.0)); }
  /// Samples point -> complex over every grid node.
  static SampledFunction sample(GridPtr grid, const std::function<Complex(const RVector&)>& f);
  static SampledFunction indicator(GridPtr grid, const Box& box);

  const GridPtr& grid() const { return grid_; }
  const CVector& values() const { return values_; }
  CVector& mutable_values() { return values_; }

 private:
  GridPtr grid_;
  CVector values_;
};

/// Quadrature realization of the integral over the product measure.
Complex integrate(const SampledFunction& f);

SampledFunction pointwise_product(const SampledFunction& a, const SampledFunction& b);

/// Strictly positive weight sampled on a grid, with optional separable
/// majorant factors w_1,...,w_n satisfying w(x) <= prod_j w_j(x_j) at every
/// node (checked at construction).
class WeightFunction {
 public:
  WeightFunction(GridPtr grid, RVector values,
                 std::vector<RVector> separable_factors = {});

  static WeightFunction constant(GridPtr grid, Real c = 1.0);
  static WeightFunction sample(GridPtr grid, const std::function<Real(const RVector&)>& w);
  /// Product of per-axis factors; the separable bound holds with equality.
  static WeightFunction separable(GridPtr grid,
                                  const std::vector<std::function<Real(Real)>>& factors);
  /// Polynomial weight v_s(x) = (1 + |x|^2)^{s/2} over the full node vector,
  /// with separable majorant <x_j>^{|s|} when s >= 0.
  static WeightFunction polynomial_vs(GridPtr grid, Real s);
  /// Moderate bound form <x_1>^{beta_1} ... <x_n>^{beta_n}, <x> = 1 + |x|.
  static WeightFunction polynomial_moderate(GridPtr grid, const std::vector<Real>& betas);

  const GridPtr& grid() const { return grid_; }
  const RVector& values() const { return values_; }
  bool has_separable_factors() const { return !factors_.empty(); }
  const std::vector<RVector>& separable_factors() const { return factors_; }

  WeightFunction reciprocal() const;
  /// True when the weight is constant on every box of the partition
  /// (relative spread below 1e-12).
  bool box_constant(const ProductGrid& grid, const std::vector<Box>& partition) const;

 private:
  GridPtr grid_;
  RVector values_;
  std::vector<RVector> factors_;
};

/// mu-average of f over each box of the partition (conditional expectation).
/// The result is constant on boxes, so its rank is at most the box count.
SampledFunction conditional_expectation(const SampledFunction& f,
                                        const std::vector<Box>& partition);

}  // namespace nuctrace
