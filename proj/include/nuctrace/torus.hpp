#pragma once

// Toroidal quantization with the e^{2pi i x.xi} character convention:
// T_sigma f(x) = sum_xi e^{2pi i x.xi} sigma(x,xi) (F f)(xi), frequencies
// truncated to the sup-norm ball |xi|_inf <= N.

#include <functional>
#include <optional>

#include "nuctrace/nuclear.hpp"
#include "nuctrace/report.hpp"

namespace nuctrace {

/// Active frequency set {xi in Z^n : |xi|_inf <= N}, enumerated
/// lexicographically with each coordinate running -N..N.
class FrequencyCutoff {
 public:
  FrequencyCutoff(int dim, int N);

  int dim() const { return dim_; }
  int N() const { return N_; }
  Eigen::Index count() const { return count_; }
  IVector frequency(Eigen::Index k) const;
  Eigen::Index index(const IVector& xi) const;

 private:
  int dim_ = 1;
  int N_ = 0;
  Eigen::Index count_ = 1;
};

using SymbolFunction = std::function<Complex(const IVector&)>;

/// Symbol sigma(x, xi): either a separable pair (alpha(x), sigma(xi)) or a
/// full table over (torus node, active frequency).
class ToroidalSymbol {
 public:
  static ToroidalSymbol separable(SampledFunction alpha, SymbolFunction sigma);
  static ToroidalSymbol multiplier(GridPtr grid, SymbolFunction sigma);
  static ToroidalSymbol table(GridPtr grid, const FrequencyCutoff& cutoff, CMatrix values);

  bool is_separable() const { return static_cast<bool>(sigma_); }
  const GridPtr& grid() const { return grid_; }
  const SampledFunction& alpha() const;
  Complex sigma(const IVector& xi) const;
  Complex value(Eigen::Index node, const IVector& xi, const FrequencyCutoff& cutoff) const;

 private:
  ToroidalSymbol() = default;
  GridPtr grid_;
  std::optional<SampledFunction> alpha_;
  SymbolFunction sigma_;
  CMatrix table_;  // node x active frequency, when not separable
  int table_N_ = -1;
};

/// Fourier coefficient integral f(y) e^{-2pi i y.xi} dy by quadrature; exact
/// for band-limited f on uniform periodic grids.
Complex toroidal_fourier_coefficient(const SampledFunction& f, const IVector& xi);

/// Requires a periodic uniform grid with at least min_points per axis.
void require_torus_grid(const ProductGrid& grid, int min_points, const char* where);

SampledFunction toroidal_apply(const ToroidalSymbol& symbol, const SampledFunction& f,
                               const FrequencyCutoff& cutoff);

/// Matrix of alpha T_sigma in the character basis e_xi(x) = e^{2pi i x.xi}:
/// M[eta, xi] = alphahat(eta - xi) sigma(xi). alpha must be sampled on at
/// least 4N+4 points per axis so the needed coefficients are alias-free.
CMatrix assemble_matrix(const SampledFunction& alpha, const SymbolFunction& sigma,
                        const FrequencyCutoff& cutoff);

/// sigma(xi) = (1 + 4 pi^2 |xi|^2)^{-tau/2}, the symbol of (I-Delta)^{-tau/2}.
SymbolFunction bessel_symbol(Real tau, int dim);

/// Exact comparison r*tau > n for the Bessel nuclearity hypothesis.
bool bessel_hypothesis(Real r, Real tau, int dim);

/// Upper bound on sum_{|xi|>N} (1+4pi^2 xi^2)^{-tau/2}, dim = 1, tau > 1.
Real bessel_tail_bound(Real tau, int N);

/// High-precision full sum over Z (dim = 1): closed coth form for tau = 2,
/// direct summation with an integral tail estimate otherwise.
Real bessel_full_sum(Real tau);

/// Canonical representation g_xi = sigma(xi) alpha e_xi, h_xi = e_{-xi} over
/// the active set, with its quasinorm ledger in the configured spaces.
struct ToroidalNuclearityLedger {
  Real r = 1.0;
  Real total = 0.0;
  RVector terms;            // per-frequency |sigma|-weighted norm products
  std::optional<bool> bessel_hypothesis_satisfied;
};

ToroidalNuclearityLedger nuclearity_ledger(const SampledFunction& alpha,
                                           const SymbolFunction& sigma, Real r,
                                           const SpaceDescriptor& source,
                                           const SpaceDescriptor& target,
                                           const FrequencyCutoff& cutoff,
                                           std::optional<Real> bessel_tau = std::nullopt);

/// Full trace verification for the separable symbol alpha(x) sigma(xi):
/// matrix trace, dense eigenvalue sum, canonical pairing trace, and the
/// caller-supplied target with its truncation tail bound.
SpectralReport verify_corollary_trace(const SampledFunction& alpha, const SymbolFunction& sigma,
                                      const FrequencyCutoff& cutoff,
                                      Eigen::Index dimension_cap = 4096,
                                      std::optional<Real> closed_form_target = std::nullopt,
                                      std::optional<Real> tail_bound = std::nullopt,
                                      std::string target_provenance = "");

/// Max-norm of the commutator M M* - M* M; zero iff M is normal.
Real nonnormality_witness(const CMatrix& M);

}  // namespace nuctrace
