#pragma once

// Short-time Fourier transform and the time-frequency norms built on it.
//
// Convention: angular frequency throughout this module,
//   fhat(xi)   = integral f(t) e^{-i t.xi} dt,
//   V_g f(x,xi) = integral f(t) conj(g(t-x)) e^{-i t.xi} dt,
// which makes |V_g f(x,xi)| = (2pi)^{-d} |V_{ghat} fhat(xi,-x)| hold with the
// literal (2pi)^{-d} factor. The torus module uses e^{2pi i x.xi} characters
// instead; the two conventions are never mixed.

#include "nuctrace/grid.hpp"
#include "nuctrace/mixed_norm.hpp"

namespace nuctrace {

/// Truncated R^d box [-L, L)^d sampled uniformly, with the dual frequency
/// grid: spacing 2pi/(2L) per axis, m nodes spanning [-m dxi/2, m dxi/2).
class TFGrid {
 public:
  static TFGrid box(int d, Real half_width, int n_space, int m_freq = -1);

  int d() const { return d_; }
  Real half_width() const { return half_width_; }
  const GridPtr& space() const { return space_; }
  const GridPtr& freq() const { return freq_; }
  /// Product grid with axes (x_1..x_d, xi_1..xi_d), row-major.
  const GridPtr& joint() const { return joint_; }
  /// Space and frequency exchanged: axes (xi_1..xi_d, x_1..x_d).
  TFGrid swapped() const;

 private:
  TFGrid() = default;
  int d_ = 0;
  Real half_width_ = 0.0;
  GridPtr space_, freq_, joint_;
};

/// Window g on the space grid; must be nonzero with edge magnitudes below
/// 1e-10 of the peak so box truncation error is negligible.
class Window {
 public:
  explicit Window(SampledFunction g);
  static Window gaussian(GridPtr space_grid, Real width = 1.0);

  const SampledFunction& function() const { return g_; }

 private:
  SampledFunction g_;
};

/// True when the function's magnitude on every axis-edge slab is below
/// rel_tol times its peak magnitude.
bool edge_decay_ok(const SampledFunction& f, Real rel_tol = 1e-10);

/// V_g f sampled on tf.joint(); linear in f, conjugate-linear in g.
SampledFunction stft(const SampledFunction& f, const Window& g, const TFGrid& tf);

/// fhat on tf.freq() by quadrature on the space grid.
SampledFunction fourier_transform(const SampledFunction& f, const TFGrid& tf);

/// Axis transposition F(x,xi) -> F(xi,x); an exact involution.
SampledFunction swap_tf(const SampledFunction& F, const TFGrid& tf);

/// || V_g f . w ||_{L^{(p,..,p,q,..,q)}} — the weight enters pointwise, i.e.
/// raised to the same power as |V_g f| inside each iterated integral.
Real modulation_norm(const SampledFunction& f, const Window& g, const TFGrid& tf, Real p, Real q,
                     const WeightFunction& w);

/// || swap(V_g f . w) ||_{L^{(q,..,q,p,..,p)}}; coincides with the modulation
/// norm when p == q since the swap is measure-preserving.
Real wiener_amalgam_norm(const SampledFunction& f, const Window& g, const TFGrid& tf, Real p,
                         Real q, const WeightFunction& w);

struct SwapCheckReport {
  // sup |lhs - rhs| / sup |lhs| of the modulus identity over the TF grid
  Real max_relative_deviation = 0.0;
  Real wiener_norm = 0.0;        // ||f||_{W^{p,q}_{v_s}}
  Real modulation_norm_fhat = 0.0;  // ||fhat||_{M^{q,p}_{w0}}, w0(a,b) = v_s(-b,a)
  Real ratio = 0.0;              // wiener_norm / modulation_norm_fhat
};

/// Evaluates both sides of |V_g f(x,xi)| = (2pi)^{-d} |V_{ghat} fhat(xi,-x)|
/// on the grid and the two sides of the Fourier-swap norm equivalence.
/// d = 1 only; requires f, g, fhat, ghat to pass the edge-decay check.
SwapCheckReport fourier_swap_check(const SampledFunction& f, const Window& g, const TFGrid& tf,
                                   Real p, Real q, Real s);

}  // namespace nuctrace
