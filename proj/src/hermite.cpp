#include "nuctrace/hermite.hpp"

#include <cmath>
#include <numbers>

namespace nuctrace {

namespace {

// 1D tables phi_0..phi_J at the axis nodes via the stable recurrence
// phi_{j+1} = sqrt(2/(j+1)) x phi_j - sqrt(j/(j+1)) phi_{j-1}.
RMatrix hermite_axis_table(const Axis& axis, int max_degree) {
  const Eigen::Index n = axis.size();
  RMatrix table(n, max_degree + 1);
  const Real norm0 = std::pow(std::numbers::pi, -0.25);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real x = axis.nodes()[i];
    table(i, 0) = norm0 * std::exp(-0.5 * x * x);
    if (max_degree >= 1) table(i, 1) = std::sqrt(2.0) * x * table(i, 0);
    for (int j = 1; j < max_degree; ++j) {
      table(i, j + 1) = std::sqrt(2.0 / (j + 1)) * x * table(i, j) -
                        std::sqrt(Real(j) / (j + 1)) * table(i, j - 1);
    }
  }
  return table;
}

// Multi-indices with |k| <= max_degree, ordered by total degree then
// lexicographically within a degree.
std::vector<IVector> enumerate_indices(int d, int max_degree) {
  std::vector<IVector> out;
  IVector k = IVector::Zero(d);
  const std::function<void(int, int)> fill = [&](int pos, int remaining) {
    if (pos == d - 1) {
      k[pos] = remaining;
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[pos] = v;
      fill(pos + 1, remaining - v);
    }
  };
  for (int degree = 0; degree <= max_degree; ++degree) fill(0, degree);
  return out;
}

// Spectral second derivative along one axis of a row-major tensor, treating
// the axis extent as one period. W and Winv are the n-point DFT matrices,
// nu2 the squared angular frequencies.
struct AxisSpectral {
  CMatrix forward;        // DFT
  CMatrix inverse_d2;     // IDFT * diag(-nu^2) / n
};

AxisSpectral axis_spectral(const Axis& axis) {
  const Eigen::Index n = axis.size();
  const Real period = axis.spacing() * n;
  AxisSpectral s;
  s.forward.resize(n, n);
  CMatrix inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Real angle = -2.0 * std::numbers::pi * Real(i) * Real(j) / Real(n);
      s.forward(i, j) = Complex(std::cos(angle), std::sin(angle));
      inv(i, j) = std::conj(s.forward(i, j));
    }
  }
  RVector nu2(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Real jj = (j <= n / 2) ? Real(j) : Real(j) - Real(n);
    const Real nu = 2.0 * std::numbers::pi * jj / period;
    nu2[j] = nu * nu;
  }
  s.inverse_d2 = inv * (-nu2.cast<Complex>()).asDiagonal() / Real(n);
  return s;
}

}  // namespace

GridPtr hermite_default_grid(int d) {
  std::vector<Axis> axes;
  for (int k = 0; k < d; ++k) axes.push_back(Axis::uniform(-12.0, 12.0, 512));
  return ProductGrid::make(std::move(axes));
}

HermiteBasis::HermiteBasis(int d, int max_degree, GridPtr grid)
    : d_(d), max_degree_(max_degree), grid_(std::move(grid)) {
  if (d_ < 1) throw std::invalid_argument("HermiteBasis: d must be >= 1");
  if (max_degree_ < 0) throw std::invalid_argument("HermiteBasis: max_degree must be >= 0");
  if (grid_->dim() != d_) throw std::invalid_argument("HermiteBasis: grid dimension mismatch");

  std::vector<RMatrix> tables;
  for (int k = 0; k < d_; ++k) {
    const Axis& axis = grid_->axis(k);
    if (!axis.uniform_spacing() || axis.periodic())
      throw std::invalid_argument("HermiteBasis: need uniform non-periodic box axes");
    tables.push_back(hermite_axis_table(axis, max_degree_));
    // edge-decay precondition on the highest degree
    const Eigen::Index n = axis.size();
    const RVector top = tables.back().col(max_degree_);
    const Real peak = top.cwiseAbs().maxCoeff();
    if (std::max(std::abs(top[0]), std::abs(top[n - 1])) >= 1e-10 * peak)
      throw std::invalid_argument("HermiteBasis: phi_J does not decay below 1e-10 at box edges");
  }

  indices_ = enumerate_indices(d_, max_degree_);
  const Eigen::Index nodes = grid_->size();
  values_.resize(nodes, static_cast<Eigen::Index>(indices_.size()));
  eigenvalues_.resize(static_cast<Eigen::Index>(indices_.size()));
  std::vector<int> idx(static_cast<size_t>(d_));
  for (size_t c = 0; c < indices_.size(); ++c) {
    const IVector& k = indices_[c];
    eigenvalues_[static_cast<Eigen::Index>(c)] = 2.0 * Real(k.sum()) + Real(d_);
    for (Eigen::Index i = 0; i < nodes; ++i) {
      grid_->unravel(i, idx);
      Real v = 1.0;
      for (int a = 0; a < d_; ++a) v *= tables[static_cast<size_t>(a)](idx[static_cast<size_t>(a)], k[a]);
      values_(i, static_cast<Eigen::Index>(c)) = v;
    }
  }

  // Certification: Gram matrix against the identity.
  const RVector& qw = grid_->node_weights();
  const RMatrix gram = values_.transpose() * qw.asDiagonal() * values_;
  gram_error_ = (gram - RMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (gram_error_ > 1e-8)
    throw std::runtime_error("HermiteBasis: orthonormality certification failed");

  // Certification: || A phi - lambda phi ||_2 / || phi ||_2 with the
  // potential applied pointwise and -Delta by spectral differentiation.
  std::vector<AxisSpectral> spectral;
  for (int a = 0; a < d_; ++a) spectral.push_back(axis_spectral(grid_->axis(a)));
  RVector x2(nodes);
  for (Eigen::Index i = 0; i < nodes; ++i) x2[i] = grid_->node(i).squaredNorm();

  max_eigen_residual_ = 0.0;
  for (size_t c = 0; c < indices_.size(); ++c) {
    const CVector phi = values_.col(static_cast<Eigen::Index>(c)).cast<Complex>();
    CVector laplacian = CVector::Zero(nodes);
    for (int a = 0; a < d_; ++a) {
      // second derivative along axis a of the row-major tensor
      CVector work = phi;
      const Eigen::Index na = grid_->axis(a).size();
      const Eigen::Index stride = grid_->stride(a);
      const Eigen::Index blocks = nodes / (na * stride);
      CVector fiber(na), tmp(na);
      for (Eigen::Index b = 0; b < blocks; ++b) {
        for (Eigen::Index r = 0; r < stride; ++r) {
          const Eigen::Index base = b * na * stride + r;
          for (Eigen::Index t = 0; t < na; ++t) fiber[t] = phi[base + t * stride];
          tmp = spectral[static_cast<size_t>(a)].inverse_d2 *
                (spectral[static_cast<size_t>(a)].forward * fiber);
          for (Eigen::Index t = 0; t < na; ++t) work[base + t * stride] = tmp[t];
        }
      }
      laplacian += work;
    }
    const CVector Aphi =
        -laplacian + (x2.array().cast<Complex>() * phi.array()).matrix();
    const CVector resid = Aphi - eigenvalues_[static_cast<Eigen::Index>(c)] * phi;
    const Real rnorm = std::sqrt((resid.cwiseAbs2().array() * qw.array()).sum());
    const Real pnorm = std::sqrt((phi.cwiseAbs2().array() * qw.array()).sum());
    max_eigen_residual_ = std::max(max_eigen_residual_, rnorm / pnorm);
  }
  if (max_eigen_residual_ > 1e-6)
    throw std::runtime_error("HermiteBasis: eigen-residual certification failed");
}

SampledFunction HermiteBasis::function(int k) const {
  return SampledFunction(grid_, values_.col(k).cast<Complex>());
}

int HermiteBasis::count_up_to_degree(int degree) const {
  int c = 0;
  for (const IVector& k : indices_)
    if (k.sum() <= degree) ++c;
  return c;
}

namespace {

int checked_prefix(const HermiteBasis& basis, int degree) {
  if (degree < 0 || degree > basis.max_degree())
    throw std::invalid_argument("hermite: degree outside the built basis");
  return basis.count_up_to_degree(degree);
}

}  // namespace

NuclearRepresentation functional_calculus_representation(const SpectralFunction& F,
                                                         const HermiteBasis& basis, int degree) {
  const int m = checked_prefix(basis, degree);
  std::vector<SampledFunction> g, h;
  g.reserve(static_cast<size_t>(m));
  h.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const SampledFunction phi = basis.function(k);
    g.emplace_back(basis.grid(), F(basis.eigenvalue(k)) * phi.values());
    h.push_back(phi);
  }
  return NuclearRepresentation(std::move(g), std::move(h), 1.0);
}

SampledFunction functional_calculus_kernel(const SpectralFunction& F, const HermiteBasis& basis,
                                           int degree) {
  if (basis.d() != 1)
    throw std::invalid_argument("functional_calculus_kernel: dense assembly is d = 1 only");
  return kernel(functional_calculus_representation(F, basis, degree));
}

NuclearityCriterionSum nuclearity_criterion(const SpectralFunction& F, const HermiteBasis& basis,
                                            Real r, Real p, Real q, Real s, const TFGrid& tf) {
  if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("nuclearity_criterion: r must be in (0,1]");
  require_same_grid(basis.grid(), tf.space(), "nuclearity_criterion");

  const Window window = Window::gaussian(tf.space());
  const WeightFunction vs = WeightFunction::polynomial_vs(tf.joint(), s);
  const WeightFunction vms = WeightFunction::polynomial_vs(tf.joint(), -s);

  std::vector<Real> primal(static_cast<size_t>(2 * tf.d()), p);
  std::vector<Real> dual(static_cast<size_t>(2 * tf.d()));
  for (int a = 0; a < tf.d(); ++a) primal[static_cast<size_t>(tf.d() + a)] = q;
  const Real pd = (p == 1.0) ? kInfinity : p / (p - 1.0);
  const Real qd = (q == 1.0) ? kInfinity : q / (q - 1.0);
  for (int a = 0; a < tf.d(); ++a) {
    dual[static_cast<size_t>(a)] = pd;
    dual[static_cast<size_t>(tf.d() + a)] = qd;
  }

  NuclearityCriterionSum out;
  out.r = r;
  out.terms.resize(basis.count());
  out.partial_sums.resize(basis.count());
  out.modulation_norms.resize(basis.count());
  out.dual_modulation_norms.resize(basis.count());
  Real running = 0.0;
  for (int k = 0; k < basis.count(); ++k) {
    const SampledFunction V = stft(basis.function(k), window, tf);
    const Real mn = mixed_norm(V, ExponentTuple(primal), vs, WeightConvention::kPointwise);
    const Real dn = mixed_norm(V, DualExponentTuple(dual), vms);
    out.modulation_norms[k] = mn;
    out.dual_modulation_norms[k] = dn;
    out.terms[k] = std::pow(std::abs(F(basis.eigenvalue(k))), r) * std::pow(mn, r) *
                   std::pow(dn, r);
    running += out.terms[k];
    out.partial_sums[k] = running;
  }
  out.total = running;
  return out;
}

SpectralReport trace_formula_check(const SpectralFunction& F, const HermiteBasis& basis,
                                   int degree, std::optional<Real> closed_form_target,
                                   std::optional<Real> tail_bound,
                                   std::string target_provenance) {
  const int m = checked_prefix(basis, degree);
  const RVector& qw = basis.grid()->node_weights();

  // (a) kernel-diagonal quadrature: integral sum_k F(lambda_k) phi_k(x)^2 dx
  Complex diag_trace(0.0);
  CVector fvals(m);
  for (int k = 0; k < m; ++k) {
    fvals[k] = F(basis.eigenvalue(k));
    const auto phi2 = basis.values().col(k).cwiseAbs2();
    diag_trace += fvals[k] * (phi2.array() * qw.array()).sum();
  }
  // (b) the eigenvalue series
  const Complex series = fvals.sum();

  SpectralReport report;
  report.eigenvalues = fvals;
  std::sort(report.eigenvalues.data(), report.eigenvalues.data() + report.eigenvalues.size(),
            [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
  report.matrix_trace = diag_trace;   // operator-side route
  report.eigenvalue_sum = series;     // spectral-side route
  report.pairing_trace = diag_trace;  // the pairing sum is the same quadrature
  report.closed_form_target = closed_form_target;
  report.truncation_tail_bound = tail_bound;
  report.target_provenance = std::move(target_provenance);
  report.residuals["diagonal_vs_series"] = std::abs(diag_trace - series);
  if (closed_form_target)
    report.residuals["series_vs_target"] = std::abs(series - Complex(*closed_form_target));
  report.context["degree"] = static_cast<Real>(degree);
  report.context["terms"] = static_cast<Real>(m);
  report.context["d"] = static_cast<Real>(basis.d());
  return report;
}

}  // namespace nuctrace
