#include "nuctrace/nuclear.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nuctrace {

Real space_norm(const SampledFunction& f, const SpaceDescriptor& space) {
  return std::visit(
      [&](const auto& s) -> Real {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, MixedSpace>) {
          return mixed_norm(f, s.exponents, s.weight, s.convention);
        } else {
          return luxemburg_norm(f, s.exponent);
        }
      },
      space);
}

Real dual_space_norm(const SampledFunction& f, const SpaceDescriptor& space) {
  return std::visit(
      [&](const auto& s) -> Real {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, MixedSpace>) {
          return mixed_norm(f, dual_exponents(s.exponents), s.weight.reciprocal());
        } else {
          return luxemburg_norm(f, dual_exponent(s.exponent));
        }
      },
      space);
}

NuclearRepresentation::NuclearRepresentation(std::vector<SampledFunction> g,
                                             std::vector<SampledFunction> h, Real r)
    : g_(std::move(g)), h_(std::move(h)), r_(r) {
  if (g_.empty() || g_.size() != h_.size())
    throw std::invalid_argument("NuclearRepresentation: need matching nonempty pair lists");
  if (!(r_ > 0.0) || r_ > 1.0)
    throw std::invalid_argument("NuclearRepresentation: order r must lie in (0, 1]");
  target_grid_ = g_.front().grid();
  source_grid_ = h_.front().grid();
  for (const auto& gn : g_) require_same_grid(gn.grid(), target_grid_, "NuclearRepresentation(g)");
  for (const auto& hn : h_) require_same_grid(hn.grid(), source_grid_, "NuclearRepresentation(h)");
}

void NuclearRepresentation::set_spaces(SpaceDescriptor source, SpaceDescriptor target) {
  source_ = std::move(source);
  target_ = std::move(target);
}

const SpaceDescriptor& NuclearRepresentation::source_space() const {
  if (!source_) throw std::logic_error("NuclearRepresentation: space descriptors not set");
  return *source_;
}

const SpaceDescriptor& NuclearRepresentation::target_space() const {
  if (!target_) throw std::logic_error("NuclearRepresentation: space descriptors not set");
  return *target_;
}

SampledFunction apply(const NuclearRepresentation& T, const SampledFunction& f) {
  require_same_grid(f.grid(), T.source_grid(), "apply");
  CVector out = CVector::Zero(T.target_grid()->size());
  for (int n = 0; n < T.terms(); ++n) {
    const Complex c = dual_pairing(T.h(n), f);
    out += c * T.g(n).values();
  }
  return SampledFunction(T.target_grid(), std::move(out));
}

SampledFunction kernel(const NuclearRepresentation& T) {
  const Eigen::Index nt = T.target_grid()->size();
  const Eigen::Index ns = T.source_grid()->size();
  CMatrix K = CMatrix::Zero(nt, ns);
  for (int n = 0; n < T.terms(); ++n)
    K.noalias() += T.g(n).values() * T.h(n).values().transpose();
  std::vector<Axis> axes = T.target_grid()->axes();
  const auto& src = T.source_grid()->axes();
  axes.insert(axes.end(), src.begin(), src.end());
  GridPtr product = ProductGrid::make(std::move(axes));
  // row-major (x, y): x over target nodes, y over source nodes
  CVector values(nt * ns);
  Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
      values.data(), nt, ns);
  view = K;
  return SampledFunction(std::move(product), std::move(values));
}

namespace {

QuasinormLedger quasinorm_impl(const NuclearRepresentation& T, Real r) {
  if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("quasinorm: r must lie in (0, 1]");
  QuasinormLedger ledger;
  ledger.r = r;
  ledger.terms.resize(T.terms());
  ledger.g_norms.resize(T.terms());
  ledger.h_dual_norms.resize(T.terms());
  for (int n = 0; n < T.terms(); ++n) {
    const Real gn = space_norm(T.g(n), T.target_space());
    const Real hn = dual_space_norm(T.h(n), T.source_space());
    ledger.g_norms[n] = gn;
    ledger.h_dual_norms[n] = hn;
    ledger.terms[n] = std::pow(gn, r) * std::pow(hn, r);
  }
  ledger.total = ledger.terms.sum();
  return ledger;
}

}  // namespace

QuasinormLedger quasinorm(const NuclearRepresentation& T) { return quasinorm_impl(T, T.order()); }

QuasinormLedger quasinorm(const NuclearRepresentation& T, Real r) { return quasinorm_impl(T, r); }

Complex trace_by_pairing(const NuclearRepresentation& T) {
  require_same_grid(T.source_grid(), T.target_grid(), "trace_by_pairing");
  Complex tr(0.0);
  for (int n = 0; n < T.terms(); ++n) tr += dual_pairing(T.g(n), T.h(n));
  return tr;
}

CMatrix operator_matrix(const NuclearRepresentation& T) {
  require_same_grid(T.source_grid(), T.target_grid(), "operator_matrix");
  const Eigen::Index n = T.source_grid()->size();
  CMatrix K = CMatrix::Zero(n, n);
  for (int t = 0; t < T.terms(); ++t)
    K.noalias() += T.g(t).values() * T.h(t).values().transpose();
  return K * T.source_grid()->node_weights().asDiagonal();
}

CVector eigenvalues_sorted(const CMatrix& M) {
  Eigen::ComplexEigenSolver<CMatrix> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues_sorted: eigensolver did not converge");
  CVector ev = solver.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(),
            [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
  return ev;
}

EigenvalueTrace trace_by_eigenvalues(const NuclearRepresentation& T, Eigen::Index dimension_cap) {
  require_same_grid(T.source_grid(), T.target_grid(), "trace_by_eigenvalues");
  if (T.source_grid()->size() > dimension_cap)
    throw std::invalid_argument("trace_by_eigenvalues: grid exceeds the dense-solve cap");
  EigenvalueTrace result;
  result.eigenvalues = eigenvalues_sorted(operator_matrix(T));
  result.sum = result.eigenvalues.sum();
  return result;
}

}  // namespace nuctrace
