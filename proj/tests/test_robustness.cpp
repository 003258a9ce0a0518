#include "cvrl/robustness.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace cvrl {
namespace {

using testing::random_density;
using testing::random_density_matrix;
using testing::random_pure_vector;

double fock_closed_form(int n) {
  return std::pow(n + 1.0, n + 1) / (n == 0 ? 1.0 : std::pow(n, n)) - 1.0;
}

// Smallest gamma with e^gamma sigma - rho >= 0, by bisection on PSD feasibility.
double dmax_by_bisection(const Matrix& rho, const Matrix& sigma) {
  const auto feasible = [&](double g) {
    return hermitian_eigenvalues(std::exp(g) * sigma - rho).minCoeff() >= 0.0;
  };
  double lo = -1.0, hi = 1.0;
  while (!feasible(hi)) hi *= 2.0;
  while (feasible(lo)) lo *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

TEST(Dmax, SelfIsZero) {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 6; ++n) {
    const auto rho = random_density(rng, n);
    EXPECT_NEAR(dmax(rho, rho), 0.0, 1e-10);
  }
}

TEST(Dmax, AgreesWithBisectionOracle) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const auto rho = random_density(rng, n);
    const auto sigma = random_density(rng, n);
    EXPECT_NEAR(dmax(rho, sigma), dmax_by_bisection(rho.matrix(), sigma.matrix()), 1e-6);
  }
}

TEST(Dmax, FockAgainstThermal) {
  for (int n = 1; n <= 4; ++n) {
    const auto sigma = synthesize(GaussianParams::thermal(n), 8 * n + 40, 1.0);
    EXPECT_NEAR(dmax(DensityState::fock(n, 8 * n + 40), sigma), std::log1p(fock_closed_form(n)),
                1e-10);
  }
}

TEST(Dmax, SupportViolationIsInfinite) {
  const auto vac = DensityState::fock(0, 6);
  EXPECT_EQ(dmax(DensityState::fock(1, 6), vac), kInfinity);
  EXPECT_EQ(rel_entropy(DensityState::fock(1, 6), vac), kInfinity);
  EXPECT_THROW(optimal_observable(DensityState::fock(1, 6), vac), SupportError);
  EXPECT_DOUBLE_EQ(dmax(vac, DensityState::maximally_mixed(6)), std::log(6.0));
}

TEST(Dmax, RejectsShapeMismatch) {
  EXPECT_THROW(dmax(DensityState::fock(0, 3), DensityState::fock(0, 4)), InvalidDimension);
}

TEST(Dmax, AdditiveUnderTensorProducts) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const auto rho = random_density(rng, n);
    const auto sigma = random_density(rng, n);
    EXPECT_NEAR(dmax(tensor(rho, rho), tensor(sigma, sigma)), 2.0 * dmax(rho, sigma), 1e-8);
  }
}

TEST(RelEntropy, BoundedByDmax) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const auto rho = random_density(rng, n, 1 + trial % n);
    const auto sigma = random_density(rng, n);
    EXPECT_NEAR(rel_entropy(rho, rho), 0.0, 1e-9);
    EXPECT_LE(rel_entropy(rho, sigma), dmax(rho, sigma) + 1e-10);
    EXPECT_GE(rel_entropy(rho, sigma), -1e-10);
  }
}

TEST(RelEntropy, FockOneAgainstThermal) {
  const auto sigma = synthesize(GaussianParams::thermal(1.0), 60, 1.0);
  EXPECT_NEAR(rel_entropy(DensityState::fock(1, 60), sigma), std::log(4.0), 1e-12);
}

TEST(RelEntropyNonGaussianity, FockClosedForm) {
  for (int n = 1; n <= 5; ++n) {
    EXPECT_NEAR(rel_entropy_nongaussianity(DensityState::fock(n, 20)),
                std::log1p(fock_closed_form(n)), 1e-12);
  }
}

TEST(RelEntropyNonGaussianity, VanishesOnGaussians) {
  for (const GaussianParams& p : {GaussianParams{0.4, 0.3, 1.0, {0.5, -0.2}},
                                  GaussianParams{1.0, 0.0, 0.0, {0.0, 0.0}},
                                  GaussianParams{0.0, 0.5, 2.0, {1.0, 0.0}}}) {
    EXPECT_NEAR(rel_entropy_nongaussianity(synthesize(p, 120)), 0.0, 1e-6);
  }
}

TEST(RobustnessFixed, ReferenceValues) {
  const auto thermal = synthesize(GaussianParams::thermal(0.7), 80);
  EXPECT_NEAR(robustness_fixed(thermal, GaussianParams::thermal(0.7)), 0.0, 1e-10);
  EXPECT_NEAR(robustness_fixed(DensityState::fock(1, 60), GaussianParams::thermal(1.0)), 3.0,
              1e-10);
}

TEST(PureRobustness, ClosedFormsAndAgreement) {
  const Vector vac = Vector::Unit(5, 0);
  EXPECT_NEAR(pure_robustness_fixed(vac, GaussianParams::vacuum()), 0.0, 1e-14);
  for (int n = 1; n <= 3; ++n) {
    const Vector psi = Vector::Unit(8 * n + 40, n);
    EXPECT_NEAR(pure_robustness_fixed(psi, GaussianParams::thermal(n)), fock_closed_form(n),
                1e-9 * fock_closed_form(n));
  }
  std::mt19937_64 rng(25);
  const GaussianParams sigma{0.6, 0.2, 0.8, {0.3, 0.1}};
  for (int trial = 0; trial < 10; ++trial) {
    const Vector psi = random_pure_vector(rng, 8);
    const double via_dmax = robustness_fixed(DensityState::pure(psi, 8), sigma, 1.0);
    const double direct = pure_robustness_fixed(psi, sigma, 1.0);
    EXPECT_NEAR(direct, via_dmax, 1e-8 * std::max(1.0, direct));
  }
}

TEST(PureRobustness, OutsideSupport) {
  EXPECT_EQ(pure_robustness_fixed(Vector::Unit(4, 2), GaussianParams::vacuum()), kInfinity);
  EXPECT_THROW(pure_robustness_fixed(2.0 * Vector::Unit(4, 2), GaussianParams::vacuum()),
               InvalidState);
}

TEST(MultiCopy, FormulaAndErrors) {
  EXPECT_EQ(multi_copy_robustness(0.37, 1), 0.37);
  EXPECT_EQ(multi_copy_robustness(3.0, 2), 15.0);
  EXPECT_THROW(multi_copy_robustness(-1.0, 2), InvalidArgument);
  EXPECT_THROW(multi_copy_robustness(1.0, 0), InvalidArgument);
}

TEST(OptimalObservable, AttainsDmaxRatio) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, 3);
    const auto sigma = random_density(rng, 3);
    const Matrix x = optimal_observable(rho, sigma).matrix();
    const double found = (rho.matrix() * x).trace().real() / (sigma.matrix() * x).trace().real();
    EXPECT_NEAR(found, std::exp(dmax(rho, sigma)), 1e-6 * found);
    const auto ev = hermitian_eigenvalues(x);
    EXPECT_GE(ev.minCoeff(), -1e-12);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
    // Monte-Carlo over rank-1 projectors never beats the returned one.
    for (int s = 0; s < 200; ++s) {
      const Vector v = random_pure_vector(rng, 3);
      const double ratio = (v.adjoint() * rho.matrix() * v).value().real() /
                           (v.adjoint() * sigma.matrix() * v).value().real();
      EXPECT_LE(ratio, found * (1.0 + 1e-10));
    }
  }
}

TEST(OptimalObservable, FockOneRatioFour) {
  const auto rho = DensityState::fock(1, 40);
  const auto sigma = synthesize(GaussianParams::thermal(1.0), 40, 1.0);
  const Matrix x = optimal_observable(rho, sigma).matrix();
  EXPECT_NEAR((rho.matrix() * x).trace().real() / (sigma.matrix() * x).trace().real(), 4.0,
              1e-10);
  EXPECT_NEAR(
      (optimal_observable(sigma, sigma).matrix() * sigma.matrix()).trace().real() /
          (optimal_observable(sigma, sigma).matrix() * sigma.matrix()).trace().real(),
      1.0, 1e-12);
}

TEST(RobustnessGaussian, FockOne) {
  OptimizerConfig cfg;
  cfg.starts = 4;
  const auto res = robustness_gaussian(DensityState::fock(1, 40), cfg);
  EXPECT_NEAR(res.value, 3.0, 0.03);
  EXPECT_NEAR(res.value, std::expm1(res.dmax), 1e-9);
  EXPECT_TRUE(bona_fide_check(params_to_moments(res.argmin).V));
  EXPECT_EQ(res.multistart_log.size(), 4u);
}

TEST(RobustnessGaussian, FaithfulOnGaussians) {
  OptimizerConfig cfg;
  cfg.starts = 2;
  for (const GaussianParams& p :
       {GaussianParams::thermal(0.8), GaussianParams{0.3, 0.25, 1.2, {0.4, -0.3}}}) {
    const auto res = robustness_gaussian(synthesize(p, 50), cfg);
    EXPECT_LE(res.value, 1e-4);
  }
}

TEST(RobustnessGaussian, UpperBoundedByReferenceValue) {
  OptimizerConfig cfg;
  cfg.starts = 2;
  cfg.max_sigma_tail = 1.0;
  std::mt19937_64 rng(27);
  const auto rho = DensityState(FockOperator(12, 1, random_density_matrix(rng, 12, 2)));
  const auto res = robustness_gaussian(rho, cfg);
  const double at_reference = robustness_fixed(rho, reference_gaussian(rho), 1.0);
  EXPECT_LE(res.value, at_reference + 1e-12);
}

TEST(RobustnessGaussian, InvariantUnderDisplacement) {
  OptimizerConfig cfg;
  cfg.starts = 3;
  const int cutoff = 40;
  const Matrix g = gaussian_unitary_elements({0.4, -0.2}, 0.0, 0.0, cutoff, 2);
  const Vector displaced = g.col(1) / g.col(1).norm();
  const auto base = robustness_gaussian(DensityState::fock(1, cutoff), cfg);
  const auto moved = robustness_gaussian(DensityState::pure(displaced, cutoff), cfg);
  EXPECT_NEAR(moved.value, base.value, 1e-3 * base.value);
}

TEST(RobustnessGaussian, NoFeasibleSigma) {
  // Every Gaussian at this cutoff loses more than the allowed tail.
  OptimizerConfig cfg;
  cfg.starts = 2;
  cfg.max_evals = 50;
  cfg.max_sigma_tail = 0.0;
  EXPECT_THROW(robustness_gaussian(DensityState::maximally_mixed(3), cfg), NoFeasibleSigma);
}

TEST(Homodyne, InnerMinimumMatchesAnalyticVariance) {
  HomodyneConfig cfg;
  for (double x = 0.8; x < 5.0; x += 0.3) {
    double a = 0.0;
    const double v = homodyne_inner_minimum(0.2, x, cfg, &a);
    EXPECT_NEAR(a, 2 * x * x, 1e-5 * a);
    EXPECT_NEAR(v, 0.2 * std::sqrt(std::numbers::pi * 2 * x * x) * std::exp(0.5), 1e-12);
  }
  double a = 0.0;
  homodyne_inner_minimum(0.2, 0.3, cfg, &a);
  EXPECT_EQ(a, 1.0);
}

TEST(Homodyne, GaussianMarginalGivesZero) {
  const MomentForm m = params_to_moments(GaussianParams::thermal(0.5));
  const auto b = lower_bound_homodyne([&](double x) { return gaussian_marginal(m, x); });
  EXPECT_EQ(b.value, 0.0);
}

TEST(Homodyne, BoundsFockRobustness) {
  // |1>: p(x) = 2 x^2 e^{-x^2} / sqrt(pi).
  const auto b = lower_bound_homodyne(
      [](double x) { return 2 * x * x * std::exp(-x * x) / std::sqrt(std::numbers::pi); });
  EXPECT_GT(b.value, 0.0);
  EXPECT_LE(b.value, 3.0);
}

}  // namespace
}  // namespace cvrl
