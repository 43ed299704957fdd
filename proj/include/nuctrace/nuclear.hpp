#pragma once

// Rank-one expansions T f = sum_n g_n <h_n, f>, their kernels, quasinorm
// ledgers and the two trace computations (pairing sum and eigenvalue sum of
// the quadrature matrix).

#include <optional>
#include <variant>
#include <vector>

#include "nuctrace/grid.hpp"
#include "nuctrace/mixed_norm.hpp"
#include "nuctrace/variable_exponent.hpp"

namespace nuctrace {

struct MixedSpace {
  ExponentTuple exponents;
  WeightFunction weight;
  WeightConvention convention = WeightConvention::kPointwise;
};

struct VariableExponentSpace {
  VariableExponent exponent;
};

/// Norm engine selector for the source/target spaces of a representation.
using SpaceDescriptor = std::variant<MixedSpace, VariableExponentSpace>;

Real space_norm(const SampledFunction& f, const SpaceDescriptor& space);
/// Norm in the dual space: (P', w^{-1}) for mixed, p'(.) for variable.
Real dual_space_norm(const SampledFunction& f, const SpaceDescriptor& space);

/// Finite list of pairs (g_n on the target grid, h_n on the source grid)
/// with nuclearity order r in (0, 1]. The space descriptors select the norm
/// engines used by the quasinorm ledger.
class NuclearRepresentation {
 public:
  NuclearRepresentation(std::vector<SampledFunction> g, std::vector<SampledFunction> h, Real r);

  int terms() const { return static_cast<int>(g_.size()); }
  Real order() const { return r_; }
  const SampledFunction& g(int n) const { return g_[static_cast<size_t>(n)]; }
  const SampledFunction& h(int n) const { return h_[static_cast<size_t>(n)]; }
  const GridPtr& source_grid() const { return source_grid_; }
  const GridPtr& target_grid() const { return target_grid_; }

  void set_spaces(SpaceDescriptor source, SpaceDescriptor target);
  bool has_spaces() const { return source_.has_value(); }
  const SpaceDescriptor& source_space() const;
  const SpaceDescriptor& target_space() const;

 private:
  std::vector<SampledFunction> g_, h_;
  Real r_ = 1.0;
  GridPtr source_grid_, target_grid_;
  std::optional<SpaceDescriptor> source_, target_;
};

/// T f = sum_n g_n * integral(h_n f); linear in f.
SampledFunction apply(const NuclearRepresentation& T, const SampledFunction& f);

/// Dense kernel K(x, y) = sum_n g_n(x) h_n(y) on the product grid with axes
/// (target axes..., source axes...).
SampledFunction kernel(const NuclearRepresentation& T);

struct QuasinormLedger {
  Real r = 1.0;
  Real total = 0.0;           // sum_n ||g_n||^r ||h_n||^r
  RVector terms;              // per-pair contributions
  RVector g_norms;            // ||g_n|| in the target space
  RVector h_dual_norms;       // ||h_n|| in the dual of the source space
};

/// Requires space descriptors; r defaults to the representation's order.
QuasinormLedger quasinorm(const NuclearRepresentation& T);
QuasinormLedger quasinorm(const NuclearRepresentation& T, Real r);

/// Tr(T) = sum_n integral(g_n h_n); source and target grids must coincide.
Complex trace_by_pairing(const NuclearRepresentation& T);

/// Quadrature matrix M[i][j] = K(x_i, x_j) * weight(j), so matrix algebra
/// mirrors the integral operator acting by integration.
CMatrix operator_matrix(const NuclearRepresentation& T);

struct EigenvalueTrace {
  Complex sum{0.0, 0.0};
  CVector eigenvalues;  // all eigenvalues, sorted by modulus descending
};

/// Dense general complex eigensolve of the quadrature matrix; rejects
/// dimensions above the cap instead of subsampling.
EigenvalueTrace trace_by_eigenvalues(const NuclearRepresentation& T,
                                     Eigen::Index dimension_cap = 4096);

/// Eigenvalues of a dense complex matrix, sorted by modulus descending.
CVector eigenvalues_sorted(const CMatrix& M);

}  // namespace nuctrace
