#include "nuctrace/timefreq.hpp"

#include <cmath>
#include <numbers>

namespace nuctrace {

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;

using RowMajorC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// E[t, xi] = exp(-i t xi) * quad_weight(t) for one axis pair.
CMatrix phase_matrix(const Axis& space, const Axis& freq) {
  CMatrix E(space.size(), freq.size());
  for (int i = 0; i < space.size(); ++i) {
    const Real t = space.nodes()[i];
    const Real w = space.quad_weights()[i];
    for (int j = 0; j < freq.size(); ++j) {
      const Real phase = -t * freq.nodes()[j];
      E(i, j) = Complex(std::cos(phase), std::sin(phase)) * w;
    }
  }
  return E;
}

// Contract the leading axis of a row-major tensor with E (n x m), appending
// the new axis at the end: out[rest, j] = sum_t in[t, rest] E[t, j].
CVector contract_leading_axis(const CVector& in, Eigen::Index n, const CMatrix& E) {
  const Eigen::Index rest = in.size() / n;
  const Eigen::Index m = E.cols();
  CVector out(rest * m);
  Eigen::Map<const RowMajorC> M(in.data(), n, rest);
  Eigen::Map<RowMajorC> O(out.data(), rest, m);
  O = M.transpose() * E;
  return out;
}

// Integer index offset c with g(t_i - x_a) = g[i - a + c]; requires the
// shift to be grid-aligned (uniform axis whose origin is a multiple of h).
Eigen::Index shift_offset(const Axis& axis) {
  if (!axis.uniform_spacing())
    throw std::invalid_argument("stft: space axes must be uniformly spaced");
  const Real c = -axis.nodes()[0] / axis.spacing();
  const Real r = std::round(c);
  if (std::abs(c - r) > 1e-9)
    throw std::invalid_argument("stft: window shifts are not grid-aligned");
  return static_cast<Eigen::Index>(r);
}

}  // namespace

TFGrid TFGrid::box(int d, Real half_width, int n_space, int m_freq) {
  if (d < 1) throw std::invalid_argument("TFGrid::box: need d >= 1");
  if (!(half_width > 0.0)) throw std::invalid_argument("TFGrid::box: need half_width > 0");
  if (n_space < 2 || n_space % 2 != 0)
    throw std::invalid_argument("TFGrid::box: n_space must be even and >= 2");
  if (m_freq < 0) m_freq = n_space;
  if (m_freq < 2 || m_freq % 2 != 0)
    throw std::invalid_argument("TFGrid::box: m_freq must be even and >= 2");

  const Real dxi = kTwoPi / (2.0 * half_width);
  const Real xi_max = 0.5 * m_freq * dxi;
  std::vector<Axis> sp, fr, joint;
  for (int k = 0; k < d; ++k) {
    sp.push_back(Axis::uniform(-half_width, half_width, n_space));
    fr.push_back(Axis::uniform(-xi_max, xi_max, m_freq));
  }
  joint = sp;
  joint.insert(joint.end(), fr.begin(), fr.end());

  TFGrid tf;
  tf.d_ = d;
  tf.half_width_ = half_width;
  tf.space_ = ProductGrid::make(std::move(sp));
  tf.freq_ = ProductGrid::make(std::move(fr));
  tf.joint_ = ProductGrid::make(std::move(joint));
  return tf;
}

TFGrid TFGrid::swapped() const {
  TFGrid tf;
  tf.d_ = d_;
  tf.half_width_ = half_width_;
  tf.space_ = freq_;
  tf.freq_ = space_;
  std::vector<Axis> joint = freq_->axes();
  joint.insert(joint.end(), space_->axes().begin(), space_->axes().end());
  tf.joint_ = ProductGrid::make(std::move(joint));
  return tf;
}

bool edge_decay_ok(const SampledFunction& f, Real rel_tol) {
  const ProductGrid& grid = *f.grid();
  const Real peak = f.values().cwiseAbs().maxCoeff();
  if (peak == 0.0) return false;
  std::vector<int> idx(static_cast<size_t>(grid.dim()));
  Real edge = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    for (int k = 0; k < grid.dim(); ++k) {
      if (idx[static_cast<size_t>(k)] == 0 ||
          idx[static_cast<size_t>(k)] == grid.axis(k).size() - 1) {
        edge = std::max(edge, std::abs(f.values()[i]));
        break;
      }
    }
  }
  return edge < rel_tol * peak;
}

Window::Window(SampledFunction g) : g_(std::move(g)) {
  if (g_.values().cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("Window: window must be nonzero");
  if (!edge_decay_ok(g_))
    throw std::invalid_argument("Window: insufficient decay at box edges");
}

Window Window::gaussian(GridPtr space_grid, Real width) {
  if (!(width > 0.0)) throw std::invalid_argument("Window::gaussian: width must be positive");
  return Window(SampledFunction::sample(std::move(space_grid), [width](const RVector& x) {
    return Complex(std::exp(-x.squaredNorm() / (2.0 * width * width)), 0.0);
  }));
}

SampledFunction stft(const SampledFunction& f, const Window& g, const TFGrid& tf) {
  require_same_grid(f.grid(), tf.space(), "stft");
  require_same_grid(g.function().grid(), tf.space(), "stft(window)");
  const ProductGrid& sp = *tf.space();
  const ProductGrid& fr = *tf.freq();
  const int d = tf.d();

  std::vector<CMatrix> E(static_cast<size_t>(d));
  std::vector<Eigen::Index> offset(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) {
    E[static_cast<size_t>(k)] = phase_matrix(sp.axis(k), fr.axis(k));
    offset[static_cast<size_t>(k)] = shift_offset(sp.axis(k));
  }

  const CVector& fv = f.values();
  const CVector& gv = g.function().values();
  CVector out(sp.size() * fr.size());

  std::vector<int> a(static_cast<size_t>(d)), t(static_cast<size_t>(d)),
      m(static_cast<size_t>(d));
  CVector windowed(sp.size());
  for (Eigen::Index ja = 0; ja < sp.size(); ++ja) {
    sp.unravel(ja, a);
    // windowed(t) = f(t) * conj(g(t - x_a)), zero where the shift leaves the box
    for (Eigen::Index jt = 0; jt < sp.size(); ++jt) {
      sp.unravel(jt, t);
      bool inside = true;
      Eigen::Index jg = 0;
      for (int k = 0; k < d; ++k) {
        const Eigen::Index mk =
            t[static_cast<size_t>(k)] - a[static_cast<size_t>(k)] + offset[static_cast<size_t>(k)];
        if (mk < 0 || mk >= sp.axis(k).size()) {
          inside = false;
          break;
        }
        jg += mk * sp.stride(k);
      }
      windowed[jt] = inside ? fv[jt] * std::conj(gv[jg]) : Complex(0.0);
    }
    CVector block = windowed;
    for (int k = 0; k < d; ++k)
      block = contract_leading_axis(block, sp.axis(k).size(), E[static_cast<size_t>(k)]);
    out.segment(ja * fr.size(), fr.size()) = block;
  }
  return SampledFunction(tf.joint(), std::move(out));
}

SampledFunction fourier_transform(const SampledFunction& f, const TFGrid& tf) {
  require_same_grid(f.grid(), tf.space(), "fourier_transform");
  const ProductGrid& sp = *tf.space();
  CVector block = f.values();
  for (int k = 0; k < tf.d(); ++k)
    block = contract_leading_axis(block, sp.axis(k).size(),
                                  phase_matrix(sp.axis(k), tf.freq()->axis(k)));
  return SampledFunction(tf.freq(), std::move(block));
}

SampledFunction swap_tf(const SampledFunction& F, const TFGrid& tf) {
  require_same_grid(F.grid(), tf.joint(), "swap_tf");
  const TFGrid sw = tf.swapped();
  const Eigen::Index ns = tf.space()->size();
  const Eigen::Index nf = tf.freq()->size();
  CVector out(ns * nf);
  // row-major (x, xi) -> (xi, x) is a block transpose of the flat storage
  Eigen::Map<const RowMajorC> in(F.values().data(), ns, nf);
  Eigen::Map<RowMajorC> o(out.data(), nf, ns);
  o = in.transpose();
  return SampledFunction(sw.joint(), std::move(out));
}

namespace {

std::vector<Real> tf_exponents(int d, Real inner, Real outer) {
  std::vector<Real> p(static_cast<size_t>(2 * d), inner);
  for (int k = 0; k < d; ++k) p[static_cast<size_t>(d + k)] = outer;
  return p;
}

void check_pq(Real p, Real q) {
  if (!(p >= 1.0) || !(q >= 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::invalid_argument("time-frequency norms need 1 <= p, q < infinity");
}

}  // namespace

Real modulation_norm(const SampledFunction& f, const Window& g, const TFGrid& tf, Real p, Real q,
                     const WeightFunction& w) {
  check_pq(p, q);
  require_same_grid(w.grid(), tf.joint(), "modulation_norm(weight)");
  const SampledFunction V = stft(f, g, tf);
  return mixed_norm(V, ExponentTuple(tf_exponents(tf.d(), p, q)), w,
                    WeightConvention::kPointwise);
}

Real wiener_amalgam_norm(const SampledFunction& f, const Window& g, const TFGrid& tf, Real p,
                         Real q, const WeightFunction& w) {
  check_pq(p, q);
  require_same_grid(w.grid(), tf.joint(), "wiener_amalgam_norm(weight)");
  SampledFunction V = stft(f, g, tf);
  V.mutable_values().array() *= w.values().array().cast<Complex>();
  const SampledFunction S = swap_tf(V, tf);
  const WeightFunction unit = WeightFunction::constant(S.grid());
  return mixed_norm(S, ExponentTuple(tf_exponents(tf.d(), q, p)), unit,
                    WeightConvention::kPointwise);
}

SwapCheckReport fourier_swap_check(const SampledFunction& f, const Window& g, const TFGrid& tf,
                                   Real p, Real q, Real s) {
  if (tf.d() != 1)
    throw std::invalid_argument("fourier_swap_check: implemented for d = 1");
  check_pq(p, q);
  if (!edge_decay_ok(f)) throw std::invalid_argument("fourier_swap_check: f decays too slowly");

  const SampledFunction fhat = fourier_transform(f, tf);
  const SampledFunction ghat = fourier_transform(g.function(), tf);
  if (!edge_decay_ok(fhat) || !edge_decay_ok(ghat))
    throw std::invalid_argument("fourier_swap_check: transform decays too slowly on the "
                                "frequency box");

  const Axis& xaxis = tf.space()->axis(0);
  const Axis& faxis = tf.freq()->axis(0);
  const Eigen::Index n = xaxis.size();
  const Eigen::Index m = faxis.size();

  const SampledFunction V = stft(f, g, tf);
  Eigen::Map<const RowMajorC> lhs(V.values().data(), n, m);

  // V2(xi_j, b_i) with b_i = -x_i: quadrature over the frequency axis.
  const Eigen::Index c = m / 2;  // ghat shift offset on the symmetric grid
  CMatrix E2(m, n);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Real om = faxis.nodes()[k];
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real phase = om * xaxis.nodes()[i];  // -om * b_i, b_i = -x_i
      E2(k, i) = Complex(std::cos(phase), std::sin(phase)) * faxis.quad_weights()[k];
    }
  }
  CMatrix V2(m, n);
  CVector windowed(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index idx = k - j + c;
      windowed[k] = (idx >= 0 && idx < m)
                        ? fhat.values()[k] * std::conj(ghat.values()[idx])
                        : Complex(0.0);
    }
    V2.row(j) = windowed.transpose() * E2;
  }

  SwapCheckReport rep;
  const Real scale = 1.0 / kTwoPi;  // (2pi)^{-d}, d = 1
  Real max_abs = 0.0, max_dev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Real a = std::abs(lhs(i, j));
      const Real b = scale * std::abs(V2(j, i));
      max_abs = std::max(max_abs, a);
      max_dev = std::max(max_dev, std::abs(a - b));
    }
  }
  rep.max_relative_deviation = max_dev / max_abs;

  const WeightFunction vs = WeightFunction::polynomial_vs(tf.joint(), s);
  rep.wiener_norm = wiener_amalgam_norm(f, g, tf, p, q, vs);

  // || fhat ||_{M^{q,p}_{w0}} with w0(a,b) = v_s(-b,a) = v_s(a,b) by symmetry,
  // evaluated on the (a = xi, b = -x) grid carried by V2.
  const Real h = xaxis.spacing();
  std::vector<Axis> axes2;
  axes2.push_back(faxis);
  axes2.push_back(Axis::uniform(-xaxis.nodes()[n - 1], -xaxis.nodes()[0] + h, n));
  GridPtr joint2 = ProductGrid::make(std::move(axes2));
  CVector v2flat(m * n);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) v2flat[j * n + i] = V2(j, n - 1 - i);
  const SampledFunction V2f(joint2, std::move(v2flat));
  const WeightFunction w0 = WeightFunction::polynomial_vs(joint2, s);
  rep.modulation_norm_fhat =
      mixed_norm(V2f, ExponentTuple({q, p}), w0, WeightConvention::kPointwise);
  rep.ratio = rep.wiener_norm / rep.modulation_norm_fhat;
  return rep;
}

}  // namespace nuctrace
