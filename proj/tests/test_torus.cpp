#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "nuctrace/torus.hpp"
#include "test_support.hpp"

using namespace nuctrace;
using nuctrace::testing::rng;
using nuctrace::testing::unit_torus_grid;

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi;

SampledFunction character(const GridPtr& grid, int k) {
  return SampledFunction::sample(grid, [k](const RVector& x) {
    return Complex(std::cos(kTwoPi * k * x[0]), std::sin(kTwoPi * k * x[0]));
  });
}

Real bessel_partial_sum(Real tau, Real r, int N) {
  Real s = 1.0;  // xi = 0 term
  for (int k = 1; k <= N; ++k)
    s += 2.0 * std::pow(1.0 + 4.0 * std::numbers::pi * std::numbers::pi * Real(k) * Real(k),
                        -r * tau / 2.0);
  return s;
}

}  // namespace

TEST_CASE("frequency cutoff enumeration") {
  FrequencyCutoff cut(2, 3);
  CHECK(cut.count() == 49);
  for (Eigen::Index k = 0; k < cut.count(); ++k) {
    const IVector xi = cut.frequency(k);
    CHECK(xi.cwiseAbs().maxCoeff() <= 3);
    CHECK(cut.index(xi) == k);
  }
  IVector outside(2);
  outside << 4, 0;
  CHECK_THROWS_AS(cut.index(outside), std::out_of_range);
}

TEST_CASE("toroidal apply") {
  auto grid = unit_torus_grid(64);
  const FrequencyCutoff cut(1, 8);

  SUBCASE("sigma = 1 reproduces band-limited trigonometric polynomials") {
    auto sym = ToroidalSymbol::multiplier(grid, [](const IVector&) { return Complex(1.0); });
    auto gen = rng(111);
    CVector vals = CVector::Zero(grid->size());
    std::uniform_real_distribution<Real> dist(-1.0, 1.0);
    for (int k = -8; k <= 8; ++k)
      vals += Complex(dist(gen), dist(gen)) * character(grid, k).values();
    const SampledFunction f(grid, vals);
    const auto out = toroidal_apply(sym, f, cut);
    CHECK((out.values() - f.values()).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("sigma = indicator of 0 extracts the mean") {
    auto sym = ToroidalSymbol::multiplier(
        grid, [](const IVector& xi) { return Complex(xi[0] == 0 ? 1.0 : 0.0); });
    auto f = SampledFunction::sample(grid, [](const RVector& x) {
      return Complex(2.0 + std::sin(kTwoPi * x[0]), 0.0);
    });
    const auto out = toroidal_apply(sym, f, cut);
    CHECK((out.values().array() - Complex(2.0)).abs().maxCoeff() < 1e-13);
  }

  SUBCASE("single-mode symbol: alpha = e_1, sigma = 1{xi=1} sends e_1 to e_2") {
    auto sym = ToroidalSymbol::separable(
        character(grid, 1), [](const IVector& xi) { return Complex(xi[0] == 1 ? 1.0 : 0.0); });
    const auto out = toroidal_apply(sym, character(grid, 1), cut);
    CHECK((out.values() - character(grid, 2).values()).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("aliasing precondition") {
    auto coarse = unit_torus_grid(16);
    auto sym = ToroidalSymbol::multiplier(coarse, [](const IVector&) { return Complex(1.0); });
    CHECK_THROWS_AS(toroidal_apply(sym, SampledFunction::constant(coarse, Complex(1.0)),
                                   FrequencyCutoff(1, 8)),
                    std::invalid_argument);
  }
}

TEST_CASE("assemble matrix") {
  auto grid = unit_torus_grid(64);

  SUBCASE("alpha = 1 gives the diagonal multiplier matrix") {
    const FrequencyCutoff cut(1, 5);
    auto sigma = bessel_symbol(2.0, 1);
    const CMatrix M =
        assemble_matrix(SampledFunction::constant(grid, Complex(1.0)), sigma, cut);
    for (Eigen::Index i = 0; i < cut.count(); ++i) {
      for (Eigen::Index j = 0; j < cut.count(); ++j) {
        const Complex expected = (i == j) ? sigma(cut.frequency(j)) : Complex(0.0);
        CHECK(std::abs(M(i, j) - expected) < 1e-14);
      }
    }
  }

  SUBCASE("alpha = 1 + cos(2 pi x), sigma = 1: tridiagonal with 1 and 1/2") {
    const FrequencyCutoff cut(1, 4);
    auto alpha = SampledFunction::sample(grid, [](const RVector& x) {
      return Complex(1.0 + std::cos(kTwoPi * x[0]), 0.0);
    });
    const CMatrix M = assemble_matrix(alpha, [](const IVector&) { return Complex(1.0); }, cut);
    for (Eigen::Index i = 0; i < cut.count(); ++i) {
      for (Eigen::Index j = 0; j < cut.count(); ++j) {
        Complex expected(0.0);
        if (i == j) expected = Complex(1.0);
        if (std::abs(i - j) == 1) expected = Complex(0.5);
        CHECK(std::abs(M(i, j) - expected) < 1e-14);
      }
    }
  }

  SUBCASE("matrix action matches toroidal_apply on band-limited inputs") {
    const FrequencyCutoff cut(1, 6);
    auto alpha = SampledFunction::sample(grid, [](const RVector& x) {
      return Complex(1.0 + 0.3 * std::cos(kTwoPi * x[0]), 0.2 * std::sin(2.0 * kTwoPi * x[0]));
    });
    auto sigma = bessel_symbol(1.5, 1);
    const CMatrix M = assemble_matrix(alpha, sigma, cut);

    auto gen = rng(117);
    CVector fhat(cut.count());
    std::uniform_real_distribution<Real> dist(-1.0, 1.0);
    for (Eigen::Index k = 0; k < cut.count(); ++k) fhat[k] = Complex(dist(gen), dist(gen));
    CVector fvals = CVector::Zero(grid->size());
    for (Eigen::Index k = 0; k < cut.count(); ++k)
      fvals += fhat[k] * character(grid, cut.frequency(k)[0]).values();
    const SampledFunction f(grid, fvals);

    auto sym = ToroidalSymbol::separable(alpha, sigma);
    const auto applied = toroidal_apply(sym, f, cut);
    const CVector via_matrix = M * fhat;
    // compare the active-set Fourier coefficients of both results
    for (Eigen::Index k = 0; k < cut.count(); ++k) {
      const Complex c = toroidal_fourier_coefficient(applied, cut.frequency(k));
      CHECK(std::abs(c - via_matrix[k]) < 1e-12);
    }
  }

  SUBCASE("alpha grid must be fine enough") {
    auto coarse = unit_torus_grid(32);
    CHECK_THROWS_AS(assemble_matrix(SampledFunction::constant(coarse, Complex(1.0)),
                                    bessel_symbol(2.0, 1), FrequencyCutoff(1, 8)),
                    std::invalid_argument);
  }
}

TEST_CASE("bessel symbol") {
  auto sigma = bessel_symbol(2.0, 1);
  SUBCASE("value examples") {
    IVector zero(1), one(1);
    zero << 0;
    one << 1;
    CHECK(sigma(zero).real() == 1.0);
    // 1 / (1 + 4 pi^2) = 0.0247045...
    CHECK(sigma(one).real() ==
          doctest::Approx(1.0 / (1.0 + 4.0 * std::numbers::pi * std::numbers::pi))
              .epsilon(1e-15));
    CHECK(bessel_symbol(0.5, 1)(one).real() ==
          doctest::Approx(std::pow(1.0 + 4.0 * std::numbers::pi * std::numbers::pi, -0.25))
              .epsilon(1e-15));
    CHECK_THROWS_AS(bessel_symbol(-1.0, 1), std::invalid_argument);
  }
  SUBCASE("full sum matches the coth closed form and a direct summation oracle") {
    const Real closed = 0.5 / std::tanh(0.5);  // 1.0819767068693264
    CHECK(bessel_full_sum(2.0) == doctest::Approx(closed).epsilon(1e-14));
    // independent oracle: Kahan summation to |xi| <= 2e6 plus midpoint tail
    Real sum = 1.0, comp = 0.0;
    const long M = 2'000'000;
    for (long k = 1; k <= M; ++k) {
      const Real term = 2.0 / (1.0 + 4.0 * std::numbers::pi * std::numbers::pi * Real(k) * Real(k));
      const Real y = term - comp;
      const Real t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    const Real a = 1.0 / kTwoPi;
    sum += 2.0 * a * (std::numbers::pi / 2.0 - std::atan((Real(M) + 0.5) / a)) / 1.0;
    CHECK(sum == doctest::Approx(closed).epsilon(1e-12));
  }
  SUBCASE("truncated sum at N = 128 matches the frozen high-precision value") {
    // mpmath: sum_{|xi|<=128} (1+4pi^2 xi^2)^{-1} = 1.0815824632097881
    CHECK(bessel_partial_sum(2.0, 1.0, 128) == doctest::Approx(1.0815824632097881).epsilon(1e-14));
  }
  SUBCASE("tail bound dominates the true tail") {
    const Real closed = 0.5 / std::tanh(0.5);
    for (int N : {32, 64, 128}) {
      const Real tail = closed - bessel_partial_sum(2.0, 1.0, N);
      CHECK(tail > 0.0);
      CHECK(tail <= bessel_tail_bound(2.0, N));
    }
  }
}

TEST_CASE("nuclearity ledger") {
  SUBCASE("unit character norms make the ledger the plain symbol sum") {
    auto grid = unit_torus_grid(64);
    const FrequencyCutoff cut(1, 8);
    auto alpha = SampledFunction::constant(grid, Complex(1.0));
    auto sigma = bessel_symbol(2.0, 1);
    const Real r = 2.0 / 3.0;
    Real expected = 0.0;
    for (Eigen::Index k = 0; k < cut.count(); ++k)
      expected += std::pow(std::abs(sigma(cut.frequency(k))), r);

    const SpaceDescriptor l2_mixed{
        MixedSpace{ExponentTuple({2.0}), WeightFunction::constant(grid)}};
    const auto ledger_mixed = nuclearity_ledger(alpha, sigma, r, l2_mixed, l2_mixed, cut, 2.0);
    CHECK(ledger_mixed.total == doctest::Approx(expected).epsilon(1e-10));
    CHECK(ledger_mixed.bessel_hypothesis_satisfied.has_value());
    CHECK(*ledger_mixed.bessel_hypothesis_satisfied);

    const SpaceDescriptor l2_var{VariableExponentSpace{VariableExponent::constant(grid, 2.0)}};
    const auto ledger_var = nuclearity_ledger(alpha, sigma, r, l2_var, l2_var, cut, 2.0);
    CHECK(ledger_var.total == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("bessel hypothesis flags") {
    CHECK(bessel_hypothesis(2.0 / 3.0, 2.0, 1));        // r tau = 4/3 > 1
    CHECK_FALSE(bessel_hypothesis(2.0 / 3.0, 1.0, 1));  // r tau = 2/3 < 1
    CHECK_FALSE(bessel_hypothesis(0.5, 2.0, 1));        // boundary r tau=1 is not >
  }

  SUBCASE("partial-sum dichotomy over four octaves") {
    // oracle (mpmath): shrink ratios of octave increments of sum |sigma|^r
    //  r=2/3 tau=2: 1.2551, 1.2575   (near 2^{1/3} = 1.2599)
    //  r=2/3 tau=1: 0.7922, 0.7930   (increments grow; near 2^{-1/3})
    //  r=1   tau=2: 1.9883, 1.9941
    //  r=1   tau=1: 0.9972, 0.9986
    const auto ratios = [](Real tau, Real r) {
      const Real s64 = bessel_partial_sum(tau, r, 64);
      const Real s128 = bessel_partial_sum(tau, r, 128);
      const Real s256 = bessel_partial_sum(tau, r, 256);
      const Real s512 = bessel_partial_sum(tau, r, 512);
      return std::pair{(s128 - s64) / (s256 - s128), (s256 - s128) / (s512 - s256)};
    };
    auto [a1, a2] = ratios(2.0, 2.0 / 3.0);
    CHECK(a1 == doctest::Approx(1.2551).epsilon(1e-3));
    CHECK(a2 == doctest::Approx(1.2575).epsilon(1e-3));
    auto [b1, b2] = ratios(1.0, 2.0 / 3.0);
    CHECK(b1 == doctest::Approx(0.7922).epsilon(1e-3));
    CHECK(b2 == doctest::Approx(0.7930).epsilon(1e-3));  // divergent: growing increments
    auto [c1, c2] = ratios(2.0, 1.0);
    CHECK(c1 >= 1.9);
    CHECK(c2 >= 1.9);
    auto [d1, d2] = ratios(1.0, 1.0);
    CHECK(d1 < 1.2);
    CHECK(d2 < 1.2);
  }
}

TEST_CASE("corollary trace verification") {
  SUBCASE("multiplier case at N = 32") {
    auto grid = unit_torus_grid(4 * 32 + 4);
    const FrequencyCutoff cut(1, 32);
    auto alpha = SampledFunction::constant(grid, Complex(1.0));
    const Real closed = 0.5 / std::tanh(0.5);
    const auto report = verify_corollary_trace(alpha, bessel_symbol(2.0, 1), cut, 4096, closed,
                                               bessel_tail_bound(2.0, 32), "closed-form");
    CHECK(report.residuals.at("matrix_trace_vs_product") < 1e-12);
    CHECK(report.residuals.at("eigen_sum_vs_matrix_trace") <
          1e-10 * (1.0 + std::abs(report.matrix_trace)));
    CHECK(report.residuals.at("pairing_vs_matrix_trace") < 1e-12);
    CHECK(report.residuals.at("eigen_sum_vs_target") <= *report.truncation_tail_bound);
    CHECK(report.context.at("nonnormality_witness") < 1e-12);  // diagonal matrix
  }

  SUBCASE("non-normal case keeps the same trace") {
    auto grid = unit_torus_grid(4 * 32 + 4);
    const FrequencyCutoff cut(1, 32);
    auto alpha = SampledFunction::sample(grid, [](const RVector& x) {
      return Complex(1.0 + std::cos(kTwoPi * x[0]), 0.0);
    });
    const auto report = verify_corollary_trace(alpha, bessel_symbol(2.0, 1), cut);
    // alphahat(0) = 1, so the trace matches the multiplier case
    CHECK(report.matrix_trace.real() == doctest::Approx(bessel_partial_sum(2.0, 1.0, 32)));
    CHECK(report.residuals.at("eigen_sum_vs_matrix_trace") <
          1e-8 * (1.0 + std::abs(report.matrix_trace)));
    CHECK(report.context.at("nonnormality_witness") > 1e-3);
  }

  SUBCASE("rank-one symbol: single nonzero eigenvalue c * alphahat(0)") {
    auto grid = unit_torus_grid(64);
    const FrequencyCutoff cut(1, 4);
    auto alpha = SampledFunction::sample(grid, [](const RVector& x) {
      return Complex(2.0 + std::sin(kTwoPi * x[0]), 0.0);
    });
    const Complex c(0.7, -0.3);
    const auto report = verify_corollary_trace(
        alpha, [c](const IVector& xi) { return xi[0] == 0 ? c : Complex(0.0); }, cut);
    CHECK(std::abs(report.eigenvalues[0] - c * Complex(2.0)) < 1e-10);
    for (Eigen::Index i = 1; i < report.eigenvalues.size(); ++i)
      CHECK(std::abs(report.eigenvalues[i]) < 1e-10);
  }

  SUBCASE("eigenvalue sums are Cauchy in N with analytic increments") {
    auto grid = unit_torus_grid(4 * 64 + 4);
    Real prev = 0.0;
    for (int N : {16, 32, 64}) {
      const auto report = verify_corollary_trace(SampledFunction::constant(grid, Complex(1.0)),
                                                 bessel_symbol(2.0, 1), FrequencyCutoff(1, N));
      if (N > 16) {
        const Real increment = report.eigenvalue_sum.real() - prev;
        CHECK(increment > 0.0);
        CHECK(increment <= bessel_tail_bound(2.0, N / 2));
      }
      prev = report.eigenvalue_sum.real();
    }
  }

  SUBCASE("dimension cap is enforced") {
    auto grid = unit_torus_grid(4 * 16 + 4);
    CHECK_THROWS_AS(verify_corollary_trace(SampledFunction::constant(grid, Complex(1.0)),
                                           bessel_symbol(2.0, 1), FrequencyCutoff(1, 16), 8),
                    std::invalid_argument);
  }
}
