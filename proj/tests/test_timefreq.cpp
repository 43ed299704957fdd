#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "nuctrace/timefreq.hpp"
#include "test_support.hpp"

using namespace nuctrace;
using nuctrace::testing::rng;

namespace {

constexpr Real kPi = std::numbers::pi;

SampledFunction unit_gaussian(const GridPtr& grid) {
  return SampledFunction::sample(
      grid, [](const RVector& x) { return Complex(std::exp(-0.5 * x.squaredNorm()), 0.0); });
}

Real l2_norm(const SampledFunction& f) {
  return std::sqrt((f.values().cwiseAbs2().array() * f.grid()->node_weights().array()).sum());
}

}  // namespace

TEST_CASE("TF grid invariant: frequency spacing is 2 pi over the space extent") {
  auto tf = TFGrid::box(1, 8.0, 64);
  const Real extent = tf.space()->axis(0).spacing() * tf.space()->axis(0).size();
  CHECK(tf.freq()->axis(0).spacing() == doctest::Approx(2.0 * kPi / extent).epsilon(1e-15));
  CHECK_THROWS_AS(TFGrid::box(1, 8.0, 63), std::invalid_argument);  // odd n
}

TEST_CASE("window validation") {
  auto tf = TFGrid::box(1, 8.0, 64);
  CHECK_THROWS_AS(Window(SampledFunction::zero(tf.space())), std::invalid_argument);
  // a constant has no edge decay
  CHECK_THROWS_AS(Window(SampledFunction::constant(tf.space(), Complex(1.0))),
                  std::invalid_argument);
  CHECK_NOTHROW(Window::gaussian(tf.space()));
}

TEST_CASE("stft of zero is zero; stft is linear in f") {
  auto tf = TFGrid::box(1, 8.0, 48);
  const Window g = Window::gaussian(tf.space());
  CHECK(stft(SampledFunction::zero(tf.space()), g, tf).values().cwiseAbs().maxCoeff() == 0.0);

  auto gen = rng(71);
  std::uniform_real_distribution<Real> dist(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    const auto f1 = nuctrace::testing::random_function(gen, tf.space());
    const auto f2 = nuctrace::testing::random_function(gen, tf.space());
    const Complex a(dist(gen), dist(gen)), b(dist(gen), dist(gen));
    const auto lhs = stft(SampledFunction(tf.space(), a * f1.values() + b * f2.values()), g, tf);
    const CVector rhs = a * stft(f1, g, tf).values() + b * stft(f2, g, tf).values();
    const Real scale = lhs.values().cwiseAbs().maxCoeff();
    CHECK((lhs.values() - rhs).cwiseAbs().maxCoeff() < 1e-12 * std::max(scale, 1.0));
  }
}

TEST_CASE("gaussian stft matches the closed form |V| = sqrt(pi) e^{-(x^2+xi^2)/4}") {
  auto tf = TFGrid::box(1, 8.0, 64);
  const auto f = unit_gaussian(tf.space());
  const Window g = Window::gaussian(tf.space());
  const auto V = stft(f, g, tf);
  const Eigen::Index n = tf.space()->size(), m = tf.freq()->size();
  Real max_err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real x = tf.space()->axis(0).nodes()[i];
    for (Eigen::Index j = 0; j < m; ++j) {
      const Real xi = tf.freq()->axis(0).nodes()[j];
      const Real expected = std::sqrt(kPi) * std::exp(-(x * x + xi * xi) / 4.0);
      max_err = std::max(max_err, std::abs(std::abs(V.values()[i * m + j]) - expected));
    }
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("Moyal identity at d = 1") {
  auto tf = TFGrid::box(1, 8.0, 128);
  const auto f = unit_gaussian(tf.space());
  const Window g = Window::gaussian(tf.space(), 1.2);
  const auto V = stft(f, g, tf);
  const Real vnorm = std::sqrt((V.values().cwiseAbs2().array() *
                                V.grid()->node_weights().array()).sum());
  const Real expected = std::sqrt(2.0 * kPi) * l2_norm(f) * l2_norm(g.function());
  CHECK(vnorm == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("swap") {
  auto tf = TFGrid::box(1, 4.0, 16);
  SUBCASE("F(x,xi) = x maps to G(x,xi) = xi") {
    auto F = SampledFunction::sample(tf.joint(),
                                     [](const RVector& z) { return Complex(z[0], 0.0); });
    auto G = swap_tf(F, tf);
    const TFGrid sw = tf.swapped();
    for (Eigen::Index i = 0; i < G.values().size(); ++i) {
      const RVector z = G.grid()->node(i);
      CHECK(G.values()[i].real() == doctest::Approx(z[1]).epsilon(1e-15));
    }
  }
  SUBCASE("symmetric functions are unchanged up to the axis swap") {
    auto F = SampledFunction::sample(tf.joint(), [](const RVector& z) {
      return Complex(z[0] * z[0] + z[1] * z[1], 0.0);
    });
    auto G = swap_tf(F, tf);
    // same node multiset, same values at mirrored indices
    auto gen = rng(73);
    std::uniform_int_distribution<Eigen::Index> pick(0, F.values().size() - 1);
    for (int t = 0; t < 50; ++t) {
      const Eigen::Index i = pick(gen);
      CHECK(G.values()[i].real() ==
            doctest::Approx(G.grid()->node(i).squaredNorm()).epsilon(1e-12));
    }
  }
  SUBCASE("double swap is the identity bitwise") {
    auto gen = rng(74);
    const auto F = nuctrace::testing::random_function(gen, tf.joint());
    const auto back = swap_tf(swap_tf(F, tf), tf.swapped());
    CHECK((back.values().array() == F.values().array()).all());
  }
  SUBCASE("swap is an isometry for transposed exponent tuples") {
    auto gen = rng(75);
    const auto F = nuctrace::testing::random_function(gen, tf.joint());
    const auto S = swap_tf(F, tf);
    for (Real p : {1.0, 2.0, 3.5}) {
      for (Real q : {1.5, 4.0}) {
        const Real a = mixed_norm(F, ExponentTuple({p, q}), WeightFunction::constant(tf.joint()));
        const Real b =
            mixed_norm(S, ExponentTuple({q, p}), WeightFunction::constant(S.grid()));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("modulation norm") {
  auto tf = TFGrid::box(1, 8.0, 96);
  const auto f = unit_gaussian(tf.space());
  const Window g = Window::gaussian(tf.space());
  const WeightFunction one = WeightFunction::constant(tf.joint());

  SUBCASE("p = q = 2, s = 0 equals the Moyal value") {
    const Real expected = std::sqrt(2.0 * kPi) * l2_norm(f) * l2_norm(g.function());
    CHECK(modulation_norm(f, g, tf, 2.0, 2.0, one) == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("zero input gives zero") {
    CHECK(modulation_norm(SampledFunction::zero(tf.space()), g, tf, 2.0, 4.0, one) == 0.0);
  }
  SUBCASE("window equivalence: two gaussians give comparable norms") {
    const Window g2 = Window::gaussian(tf.space(), 1.3);
    for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{1.0, 3.0}, std::pair{3.0, 1.5}}) {
      const Real n1 = modulation_norm(f, g, tf, p, q, one);
      const Real n2 = modulation_norm(f, g2, tf, p, q, one);
      const Real ratio = n1 / n2;
      CHECK(ratio > 0.1);
      CHECK(ratio < 10.0);
      MESSAGE("window-equivalence ratio p=", p, " q=", q, ": ", ratio);
    }
  }
  SUBCASE("v_s weights are monotone in s") {
    Real prev = 0.0;
    for (Real s : {0.0, 0.5, 1.0, 2.0}) {
      const Real norm =
          modulation_norm(f, g, tf, 2.0, 3.0, WeightFunction::polynomial_vs(tf.joint(), s));
      CHECK(norm >= prev);
      prev = norm;
    }
  }
  SUBCASE("exponent range is validated") {
    CHECK_THROWS_AS(modulation_norm(f, g, tf, 0.5, 2.0, one), std::invalid_argument);
    CHECK_THROWS_AS(modulation_norm(f, g, tf, 2.0, kInfinity, one), std::invalid_argument);
  }
}

TEST_CASE("wiener amalgam norm equals modulation norm when p = q") {
  auto tf = TFGrid::box(1, 8.0, 64);
  const auto f = unit_gaussian(tf.space());
  const Window g = Window::gaussian(tf.space());
  const WeightFunction vs = WeightFunction::polynomial_vs(tf.joint(), 1.0);
  CHECK(wiener_amalgam_norm(f, g, tf, 2.0, 2.0, vs) ==
        doctest::Approx(modulation_norm(f, g, tf, 2.0, 2.0, vs)).epsilon(1e-12));
  CHECK(wiener_amalgam_norm(SampledFunction::zero(tf.space()), g, tf, 2.0, 4.0, vs) == 0.0);
}

TEST_CASE("fourier swap check") {
  SUBCASE("modulus identity deviation is small on a 256-point grid") {
    auto tf = TFGrid::box(1, 8.0, 256);
    const auto f = unit_gaussian(tf.space());
    const Window g = Window::gaussian(tf.space());
    const auto rep = fourier_swap_check(f, g, tf, 2.0, 4.0, 1.0);
    CHECK(rep.max_relative_deviation < 1e-6);
  }

  SUBCASE("deviation drops by at least 4x when the spacing halves") {
    // alias-dominated regime: the L = 10 box floors at e^{-25}; the 48-point
    // grid sits well above the floor, the 96-point grid at it
    Real dev48 = 0.0, dev96 = 0.0, dev192 = 0.0;
    for (auto [n, out] : {std::pair<int, Real*>{48, &dev48}, {96, &dev96}, {192, &dev192}}) {
      auto tf = TFGrid::box(1, 10.0, n);
      const auto f = unit_gaussian(tf.space());
      const Window g = Window::gaussian(tf.space());
      *out = fourier_swap_check(f, g, tf, 2.0, 4.0, 1.0).max_relative_deviation;
    }
    CHECK(dev48 / dev96 >= 4.0);
    CHECK(dev96 <= dev48);   // monotone within noise
    CHECK(dev192 <= dev48);
    MESSAGE("deviation chain: ", dev48, " -> ", dev96, " -> ", dev192);
  }

  SUBCASE("origin point reduces to Parseval") {
    // V_g f(0,0) = integral f conj(g); V_ghat fhat(0,0) = integral fhat conj(ghat);
    // with f = g the identity at the origin is Parseval with the 2 pi factor
    auto tf = TFGrid::box(1, 8.0, 128);
    const auto f = unit_gaussian(tf.space());
    const auto fhat = fourier_transform(f, tf);
    const Real lhs = l2_norm(f) * l2_norm(f);
    const Real rhs = l2_norm(fhat) * l2_norm(fhat) / (2.0 * kPi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }

  SUBCASE("norm-equivalence ratio is stable under refinement") {
    auto tf128 = TFGrid::box(1, 8.0, 128);
    auto tf256 = TFGrid::box(1, 8.0, 256);
    const auto r128 = fourier_swap_check(unit_gaussian(tf128.space()),
                                         Window::gaussian(tf128.space()), tf128, 2.0, 4.0, 1.0);
    const auto r256 = fourier_swap_check(unit_gaussian(tf256.space()),
                                         Window::gaussian(tf256.space()), tf256, 2.0, 4.0, 1.0);
    CHECK(std::abs(r128.ratio - r256.ratio) < 1e-3 * r256.ratio);
    MESSAGE("W/M ratio at 128: ", r128.ratio, ", at 256: ", r256.ratio);
  }

  SUBCASE("insufficient decay is rejected") {
    auto tf = TFGrid::box(1, 2.0, 32);  // gaussian edge value e^{-2} on this box
    CHECK_THROWS_AS(Window::gaussian(tf.space()), std::invalid_argument);
    // wide data on a larger box: fhat too coarse to decay on the frequency box
    auto tf2 = TFGrid::box(1, 10.0, 20);
    CHECK_THROWS_AS(
        fourier_swap_check(unit_gaussian(tf2.space()), Window::gaussian(tf2.space()), tf2, 2.0,
                           4.0, 0.0),
        std::invalid_argument);
  }
}
