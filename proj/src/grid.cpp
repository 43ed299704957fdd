#include "nuctrace/grid.hpp"

#include <cmath>

namespace nuctrace {

namespace {

bool vectors_equal(const RVector& a, const RVector& b) {
  return a.size() == b.size() && a == b;
}

}  // namespace

Axis::Axis(RVector nodes, RVector quad_weights, bool periodic, Real extent)
    : nodes_(std::move(nodes)),
      weights_(std::move(quad_weights)),
      periodic_(periodic),
      extent_(extent) {
  if (nodes_.size() == 0) throw std::invalid_argument("Axis: empty node set");
  if (nodes_.size() != weights_.size())
    throw std::invalid_argument("Axis: nodes/weights length mismatch");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw std::invalid_argument("Axis: quadrature weights must be positive and finite");
  }
  for (Eigen::Index i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i] < nodes_[i + 1]))
      throw std::invalid_argument("Axis: nodes must be strictly increasing");
  }
  if (periodic_) {
    if (!(extent_ > 0.0)) throw std::invalid_argument("Axis: periodic axis needs extent > 0");
    if (nodes_[0] < 0.0 || nodes_[nodes_.size() - 1] >= extent_)
      throw std::invalid_argument("Axis: periodic nodes must lie in [0, extent)");
  }
  if (nodes_.size() >= 2) {
    const Real h = nodes_[1] - nodes_[0];
    uniform_ = true;
    for (Eigen::Index i = 1; i + 1 < nodes_.size(); ++i) {
      if (std::abs((nodes_[i + 1] - nodes_[i]) - h) > 1e-12 * std::max(1.0, std::abs(h))) {
        uniform_ = false;
        break;
      }
    }
    spacing_ = uniform_ ? h : 0.0;
  } else {
    uniform_ = true;
    spacing_ = weights_[0];
  }
}

Axis Axis::uniform(Real a, Real b, int n) {
  if (n < 1 || !(a < b)) throw std::invalid_argument("Axis::uniform: need a < b and n >= 1");
  const Real h = (b - a) / n;
  RVector nodes(n), w(n);
  for (int j = 0; j < n; ++j) {
    nodes[j] = a + h * j;
    w[j] = h;
  }
  return Axis(std::move(nodes), std::move(w), false, 0.0);
}

Axis Axis::periodic_uniform(int n, Real extent) {
  if (n < 1 || !(extent > 0.0))
    throw std::invalid_argument("Axis::periodic_uniform: need n >= 1 and extent > 0");
  const Real h = extent / n;
  RVector nodes(n), w(n);
  for (int j = 0; j < n; ++j) {
    nodes[j] = h * j;
    w[j] = h;
  }
  return Axis(std::move(nodes), std::move(w), true, extent);
}

bool operator==(const Axis& a, const Axis& b) {
  return a.periodic_ == b.periodic_ && a.extent_ == b.extent_ &&
         vectors_equal(a.nodes_, b.nodes_) && vectors_equal(a.weights_, b.weights_);
}

ProductGrid::ProductGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("ProductGrid: need at least one axis");
  const size_t n = axes_.size();
  strides_.assign(n, 1);
  total_ = 1;
  for (size_t k = n; k-- > 0;) {
    strides_[k] = total_;
    total_ *= axes_[k].size();
  }
  node_weights_.resize(total_);
  std::vector<int> idx(n, 0);
  for (Eigen::Index i = 0; i < total_; ++i) {
    Real w = 1.0;
    for (size_t k = 0; k < n; ++k) w *= axes_[k].quad_weights()[idx[k]];
    node_weights_[i] = w;
    for (size_t k = n; k-- > 0;) {
      if (++idx[k] < axes_[k].size()) break;
      idx[k] = 0;
    }
  }
}

RVector ProductGrid::node(Eigen::Index i) const {
  RVector x(dim());
  Eigen::Index rem = i;
  for (int k = 0; k < dim(); ++k) {
    const Eigen::Index j = rem / strides_[static_cast<size_t>(k)];
    rem %= strides_[static_cast<size_t>(k)];
    x[k] = axes_[static_cast<size_t>(k)].nodes()[j];
  }
  return x;
}

void ProductGrid::unravel(Eigen::Index flat, std::span<int> out) const {
  Eigen::Index rem = flat;
  for (size_t k = 0; k < axes_.size(); ++k) {
    out[k] = static_cast<int>(rem / strides_[k]);
    rem %= strides_[k];
  }
}

Eigen::Index ProductGrid::ravel(std::span<const int> idx) const {
  Eigen::Index flat = 0;
  for (size_t k = 0; k < axes_.size(); ++k) flat += idx[k] * strides_[k];
  return flat;
}

bool operator==(const ProductGrid& a, const ProductGrid& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (size_t k = 0; k < a.axes_.size(); ++k)
    if (!(a.axes_[k] == b.axes_[k])) return false;
  return true;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where) {
  if (!same_grid(a, b))
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

Eigen::Index Box::node_count() const {
  Eigen::Index n = 1;
  for (const auto& [lo, hi] : ranges) n *= (hi - lo);
  return n;
}

std::vector<Eigen::Index> Box::node_indices(const ProductGrid& grid) const {
  if (static_cast<int>(ranges.size()) != grid.dim())
    throw std::invalid_argument("Box::node_indices: dimension mismatch");
  std::vector<int> idx(ranges.size());
  for (size_t k = 0; k < ranges.size(); ++k) {
    const auto [lo, hi] = ranges[k];
    if (lo < 0 || hi > grid.axis(static_cast<int>(k)).size() || lo >= hi)
      throw std::invalid_argument("Box::node_indices: range outside axis bounds");
    idx[k] = lo;
  }
  std::vector<Eigen::Index> out;
  out.reserve(static_cast<size_t>(node_count()));
  while (true) {
    out.push_back(grid.ravel(idx));
    size_t k = ranges.size();
    while (k > 0) {
      --k;
      if (++idx[k] < ranges[k].second) break;
      idx[k] = ranges[k].first;
      if (k == 0) return out;
    }
  }
}

std::vector<Box> box_partition(const ProductGrid& grid, const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) != grid.dim())
    throw std::invalid_argument("box_partition: counts length must equal grid dimension");
  std::vector<int> block(counts.size());
  for (size_t k = 0; k < counts.size(); ++k) {
    const int n = grid.axis(static_cast<int>(k)).size();
    if (counts[k] < 1 || n % counts[k] != 0)
      throw std::invalid_argument("box_partition: counts must divide axis lengths");
    block[k] = n / counts[k];
  }
  std::vector<Box> boxes;
  std::vector<int> b(counts.size(), 0);
  while (true) {
    Box box;
    box.ranges.resize(counts.size());
    for (size_t k = 0; k < counts.size(); ++k)
      box.ranges[k] = {b[k] * block[k], (b[k] + 1) * block[k]};
    boxes.push_back(std::move(box));
    size_t k = counts.size();
    bool done = true;
    while (k-- > 0) {
      if (++b[k] < counts[k]) { done = false; break; }
      b[k] = 0;
    }
    if (done) break;
  }
  return boxes;
}

SampledFunction::SampledFunction(GridPtr grid, CVector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("SampledFunction: null grid");
  if (values_.size() != grid_->size())
    throw std::invalid_argument("SampledFunction: value count must equal grid size");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
      throw std::invalid_argument("SampledFunction: values must be finite");
  }
}

SampledFunction SampledFunction::constant(GridPtr grid, Complex c) {
  CVector v = CVector::Constant(grid->size(), c);
  return SampledFunction(std::move(grid), std::move(v));
}

SampledFunction SampledFunction::sample(GridPtr grid,
                                        const std::function<Complex(const RVector&)>& f) {
  CVector v(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) v[i] = f(grid->node(i));
  return SampledFunction(std::move(grid), std::move(v));
}

SampledFunction SampledFunction::indicator(GridPtr grid, const Box& box) {
  CVector v = CVector::Zero(grid->size());
  for (Eigen::Index i : box.node_indices(*grid)) v[i] = Complex(1.0);
  return SampledFunction(std::move(grid), std::move(v));
}

Complex integrate(const SampledFunction& f) {
  return (f.values().array() * f.grid()->node_weights().array().cast<Complex>()).sum();
}

SampledFunction pointwise_product(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise_product");
  CVector v = a.values().array() * b.values().array();
  return SampledFunction(a.grid(), std::move(v));
}

WeightFunction::WeightFunction(GridPtr grid, RVector values,
                               std::vector<RVector> separable_factors)
    : grid_(std::move(grid)), values_(std::move(values)), factors_(std::move(separable_factors)) {
  if (!grid_) throw std::invalid_argument("WeightFunction: null grid");
  if (values_.size() != grid_->size())
    throw std::invalid_argument("WeightFunction: value count must equal grid size");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
      throw std::invalid_argument("WeightFunction: weight must be strictly positive and finite");
  }
  if (!factors_.empty()) {
    if (static_cast<int>(factors_.size()) != grid_->dim())
      throw std::invalid_argument("WeightFunction: one separable factor per axis required");
    for (int k = 0; k < grid_->dim(); ++k) {
      if (factors_[static_cast<size_t>(k)].size() != grid_->axis(k).size())
        throw std::invalid_argument("WeightFunction: factor length mismatch");
    }
    std::vector<int> idx(static_cast<size_t>(grid_->dim()));
    for (Eigen::Index i = 0; i < grid_->size(); ++i) {
      grid_->unravel(i, idx);
      Real prod = 1.0;
      for (int k = 0; k < grid_->dim(); ++k)
        prod *= factors_[static_cast<size_t>(k)][idx[static_cast<size_t>(k)]];
      if (values_[i] > prod * (1.0 + 1e-12))
        throw std::invalid_argument(
            "WeightFunction: separable bound w(x) <= prod w_j(x_j) violated");
    }
  }
}

WeightFunction WeightFunction::constant(GridPtr grid, Real c) {
  RVector v = RVector::Constant(grid->size(), c);
  return WeightFunction(std::move(grid), std::move(v));
}

WeightFunction WeightFunction::sample(GridPtr grid,
                                      const std::function<Real(const RVector&)>& w) {
  RVector v(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) v[i] = w(grid->node(i));
  return WeightFunction(std::move(grid), std::move(v));
}

WeightFunction WeightFunction::separable(
    GridPtr grid, const std::vector<std::function<Real(Real)>>& factors) {
  if (static_cast<int>(factors.size()) != grid->dim())
    throw std::invalid_argument("WeightFunction::separable: one factor per axis");
  std::vector<RVector> tabs(factors.size());
  for (int k = 0; k < grid->dim(); ++k) {
    const auto& nodes = grid->axis(k).nodes();
    tabs[static_cast<size_t>(k)].resize(nodes.size());
    for (Eigen::Index j = 0; j < nodes.size(); ++j)
      tabs[static_cast<size_t>(k)][j] = factors[static_cast<size_t>(k)](nodes[j]);
  }
  RVector v(grid->size());
  std::vector<int> idx(static_cast<size_t>(grid->dim()));
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    grid->unravel(i, idx);
    Real prod = 1.0;
    for (int k = 0; k < grid->dim(); ++k)
      prod *= tabs[static_cast<size_t>(k)][idx[static_cast<size_t>(k)]];
    v[i] = prod;
  }
  return WeightFunction(std::move(grid), std::move(v), std::move(tabs));
}

WeightFunction WeightFunction::polynomial_vs(GridPtr grid, Real s) {
  RVector v(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const RVector x = grid->node(i);
    v[i] = std::pow(1.0 + x.squaredNorm(), s / 2.0);
  }
  std::vector<RVector> factors;
  if (s >= 0.0) {
    // (1 + sum x_j^2)^{s/2} <= prod (1+|x_j|)^s
    factors.resize(static_cast<size_t>(grid->dim()));
    for (int k = 0; k < grid->dim(); ++k) {
      const auto& nodes = grid->axis(k).nodes();
      factors[static_cast<size_t>(k)].resize(nodes.size());
      for (Eigen::Index j = 0; j < nodes.size(); ++j)
        factors[static_cast<size_t>(k)][j] = std::pow(1.0 + std::abs(nodes[j]), s);
    }
  }
  return WeightFunction(std::move(grid), std::move(v), std::move(factors));
}

WeightFunction WeightFunction::polynomial_moderate(GridPtr grid,
                                                   const std::vector<Real>& betas) {
  if (static_cast<int>(betas.size()) != grid->dim())
    throw std::invalid_argument("WeightFunction::polynomial_moderate: one beta per axis");
  std::vector<std::function<Real(Real)>> factors;
  factors.reserve(betas.size());
  for (Real beta : betas)
    factors.push_back([beta](Real x) { return std::pow(1.0 + std::abs(x), beta); });
  return separable(std::move(grid), factors);
}

WeightFunction WeightFunction::reciprocal() const {
  RVector v = values_.cwiseInverse();
  return WeightFunction(grid_, std::move(v));
}

bool WeightFunction::box_constant(const ProductGrid& grid,
                                  const std::vector<Box>& partition) const {
  if (!(grid == *grid_)) throw std::invalid_argument("WeightFunction::box_constant: grid mismatch");
  for (const Box& box : partition) {
    Real lo = kInfinity, hi = 0.0;
    for (Eigen::Index i : box.node_indices(grid)) {
      lo = std::min(lo, values_[i]);
      hi = std::max(hi, values_[i]);
    }
    if (hi - lo > 1e-12 * hi) return false;
  }
  return true;
}

SampledFunction conditional_expectation(const SampledFunction& f,
                                        const std::vector<Box>& partition) {
  const ProductGrid& grid = *f.grid();
  const RVector& w = grid.node_weights();
  CVector out = CVector::Zero(grid.size());
  RVector covered = RVector::Zero(grid.size());
  for (const Box& box : partition) {
    Complex num(0.0);
    Real den = 0.0;
    const auto idx = box.node_indices(grid);
    for (Eigen::Index i : idx) {
      num += f.values()[i] * w[i];
      den += w[i];
    }
    const Complex avg = num / den;
    for (Eigen::Index i : idx) {
      out[i] = avg;
      covered[i] += 1.0;
    }
  }
  for (Eigen::Index i = 0; i < covered.size(); ++i) {
    if (covered[i] != 1.0)
      throw std::invalid_argument("conditional_expectation: partition must cover each node once");
  }
  return SampledFunction(f.grid(), std::move(out));
}

}  // namespace nuctrace
