#include "cvrl/case_studies.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace cvrl {
namespace {

std::vector<double> d_grid(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

TEST(Fock, ClosedFormValues) {
  EXPECT_EQ(fock_robustness(0), 0.0);
  EXPECT_NEAR(fock_robustness(1), 3.0, 1e-14);
  EXPECT_NEAR(fock_robustness(2), 5.75, 1e-14);
  EXPECT_NEAR(fock_robustness(4), 3125.0 / 256.0 - 1.0, 1e-13);
  EXPECT_THROW(fock_robustness(-1), InvalidArgument);
}

TEST(Fock, IncreasingWithSlopeE) {
  for (int n = 0; n < 200; ++n) EXPECT_LT(fock_robustness(n), fock_robustness(n + 1));
  EXPECT_NEAR(fock_robustness(5000) / 5000.0, std::numbers::e, 1e-3);
}

// The relative entropy of a Fock state to its thermal reference is the
// reference entropy, and here it saturates the robustness.
TEST(Fock, MatchesThermalEntropyAndPureShortcut) {
  for (int n : {1, 2, 3, 5}) {
    const double s = gaussian_entropy(moments_of(synthesize(GaussianParams::thermal(n), 8 * n + 200)));
    EXPECT_NEAR(std::expm1(s), fock_robustness(n), 1e-8 * fock_robustness(n));
    const int cutoff = 8 * n + 40;
    Vector psi = Vector::Zero(cutoff);
    psi(n) = 1.0;
    EXPECT_NEAR(pure_robustness_fixed(psi, GaussianParams::thermal(n), 1.0), fock_robustness(n),
                1e-9);
  }
}

TEST(Fock, Multimode) {
  EXPECT_DOUBLE_EQ(multimode_fock_robustness({3}), fock_robustness(3));
  EXPECT_NEAR(multimode_fock_robustness({1, 1}), 15.0, 1e-13);
  EXPECT_NEAR(multimode_fock_robustness({1, 1}), multi_copy_robustness(3.0, 2), 1e-13);
  EXPECT_NEAR(multimode_fock_robustness({1, 2, 0}), 4.0 * 6.75 - 1.0, 1e-12);
  EXPECT_EQ(multimode_fock_robustness({}), 0.0);
}

TEST(Mixture, Validation) {
  EXPECT_THROW((MixtureSpec{1.5, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((MixtureSpec{0.0, -0.1}.validate()), InvalidArgument);
  EXPECT_TRUE((MixtureSpec{0.3, 0.0}.is_gaussian()));
  EXPECT_TRUE((MixtureSpec{-1.0, 2.0}.is_gaussian()));
  EXPECT_FALSE((MixtureSpec{0.0, 2.0}.is_gaussian()));
  EXPECT_THROW(mixture_state({0.0, 5.0}, 10), CutoffTooSmall);
}

TEST(Mixture, ZeroSeparationIsVacuum) {
  const auto rho = mixture_state({0.0, 0.0}, 6);
  EXPECT_NEAR((rho.matrix() - DensityState::fock(0, 6).matrix()).norm(), 0.0, 1e-15);
}

TEST(Mixture, RepresentationsShareSpectrum) {
  for (double q : {-0.7, 0.0, 0.4, 1.0}) {
    for (double d : {0.3, 1.0, 2.5}) {
      const MixtureSpec s{q, d};
      const MixtureSpectrum sp = mixture_spectrum(s);
      const RealVector fock_ev = hermitian_eigenvalues(mixture_state(s, 50).matrix());
      const Eigen::Vector2d qubit_ev =
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(mixture_qubit(s)).eigenvalues();
      EXPECT_NEAR(fock_ev(fock_ev.size() - 1), sp.lambda_plus, 1e-8);
      EXPECT_NEAR(fock_ev(fock_ev.size() - 2), sp.lambda_minus, 1e-8);
      EXPECT_LE(fock_ev.head(fock_ev.size() - 2).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_NEAR(qubit_ev(1), sp.lambda_plus, 1e-12);
      EXPECT_NEAR(qubit_ev(0), sp.lambda_minus, 1e-12);
      EXPECT_NEAR(mixture_qubit(s).trace(), 1.0, 1e-15);
    }
  }
}

TEST(Mixture, BalancedEigenvaluesAndPurity) {
  for (double d : {0.5, 1.0, 2.0}) {
    const MixtureSpectrum sp = mixture_spectrum({0.0, d});
    EXPECT_NEAR(sp.lambda_plus, 0.5 * (1 + std::exp(-d * d)), 1e-15);
    EXPECT_NEAR(sp.lambda_minus, 0.5 * (1 - std::exp(-d * d)), 1e-15);
    const Eigen::Matrix2d m = mixture_qubit({0.0, d});
    EXPECT_NEAR((m * m).trace(), 0.5 * (1 + std::exp(-2 * d * d)), 1e-15);
    EXPECT_NEAR(purity(mixture_state({0.0, d}, 40)), 0.5 * (1 + std::exp(-2 * d * d)), 1e-10);
  }
}

TEST(Mixture, WignerMarginalsMatchFockDistribution) {
  for (const MixtureSpec s : {MixtureSpec{0.0, 1.0}, MixtureSpec{0.6, 2.5}}) {
    const auto rho = mixture_state(s, 50);
    for (double x = -s.d - 3.0; x <= s.d + 3.0; x += 0.37) {
      double integral = 0.0;
      const double h = 0.01;
      for (double y = -8.0; y <= 8.0 + 1e-12; y += h) integral += h * mixture_wigner(s, x, y);
      EXPECT_NEAR(integral, mixture_marginal(s, x), 1e-6);
      EXPECT_NEAR(quadrature_density(rho, x), mixture_marginal(s, x), 1e-6);
    }
  }
}

TEST(Mixture, ReferenceMoments) {
  const MomentForm coh = mixture_reference({1.0, 1.3});
  EXPECT_NEAR(coh.mu(0), 1.3, 1e-15);
  EXPECT_TRUE(coh.V.isApprox(Eigen::Matrix2d::Identity()));
  EXPECT_NEAR(mixture_reference({0.0, 1.0}).V(0, 0), 3.0, 1e-15);
  for (const MixtureSpec s : {MixtureSpec{0.0, 1.0}, MixtureSpec{-0.5, 2.0}}) {
    const MomentForm ref = mixture_reference(s);
    const MomentForm num = moments_of(mixture_state(s, 60));
    EXPECT_NEAR((ref.mu - num.mu).norm(), 0.0, 1e-6);
    EXPECT_NEAR((ref.V - num.V).norm(), 0.0, 1e-6);
    const MixtureSpectrum sp = mixture_spectrum(s);
    EXPECT_NEAR(sp.reference_entropy, gaussian_entropy(ref), 1e-10);
    EXPECT_NEAR(sp.state_entropy, von_neumann_entropy(mixture_state(s, 60)), 1e-8);
  }
}

TEST(RelEnt, AnchorsAndPlugIn) {
  EXPECT_EQ(relent_bound({0.0, 0.0}), 0.0);
  EXPECT_NEAR(relent_bound({1.0, 2.0}), 0.0, 1e-15);
  EXPECT_NEAR(relent_bound({-1.0, 2.0}), 0.0, 1e-15);
  const double lp = 0.5 * (1 + std::exp(-4.0)), lm = 0.5 * (1 - std::exp(-4.0));
  const double s_ref = 2.0 * std::log(2.0);  // nu = 1
  const double s_rho = -lp * std::log(lp) - lm * std::log(lm);
  EXPECT_NEAR(relent_bound({0.0, 2.0}), std::exp(s_ref - s_rho) - 1.0, 1e-13);
  EXPECT_NEAR(relent_bound({0.0, 2.0}),
              std::expm1(rel_entropy_nongaussianity(mixture_state({0.0, 2.0}, 60))), 1e-8);
}

TEST(RelEnt, BelowOptimizer) {
  OptimizerConfig cfg;
  cfg.starts = 6;
  for (const MixtureSpec s : {MixtureSpec{0.0, 1.0}, MixtureSpec{0.5, 1.5}}) {
    const double opt = robustness_gaussian(mixture_state(s, 40), cfg).value;
    EXPECT_LE(relent_bound(s), opt + 1e-6);
  }
}

TEST(Homodyne, VacuumLimit) {
  const HomodyneEnvelope h = homodyne_bound(0.0);
  EXPECT_EQ(h.value, 0.0);
  EXPECT_NEAR(2 * h.x_opt * h.x_opt, 1.0, 1e-15);
  // The grid route reaches the same peak just above d = 0.
  EXPECT_NEAR(homodyne_bound(1e-9).x_opt, 1.0 / std::numbers::sqrt2, 1e-6);
}

// Dense-grid maximization of the envelope as an independent route.
TEST(Homodyne, DenseGridOracle) {
  for (double d : {0.5, 1.0, 2.5, 4.0}) {
    double best = -1e300, best_x = 0.0;
    for (double x = 1e-5; x <= d + 6.0; x += 1e-5) {
      const double v = std::exp(0.5 - (d + x) * (d + x)) * (std::exp(4 * d * x) + 1) * x /
                       std::numbers::sqrt2;
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    const HomodyneEnvelope h = homodyne_bound(d);
    EXPECT_NEAR(h.value, best - 1.0, 1e-9);
    EXPECT_NEAR(h.x_opt, best_x, 1e-4);
  }
}

TEST(Homodyne, AnalyticInnerMinimizerMatchesNumeric) {
  HomodyneConfig cfg;
  for (double d : {0.5, 1.0, 2.5}) {
    const MixtureSpec s{0.0, d};
    for (double x = 0.75; x <= d + 3.0; x += 0.25) {
      double a = 0.0;
      const double numeric = homodyne_inner_minimum(mixture_marginal(s, x), x, cfg, &a);
      EXPECT_NEAR(numeric, std::exp(homodyne_log_envelope(d, x)), 1e-6);
      EXPECT_NEAR(a, 2 * x * x, 1e-4 * a);
    }
    EXPECT_NEAR(mixture_homodyne_bound(s).value, homodyne_bound(d).value, 1e-6);
  }
}

TEST(Homodyne, MonotoneWithLinearGrowth) {
  const auto ds = d_grid(0.0, 5.0, 0.1);
  double prev = -1.0;
  for (double d : ds) {
    const double v = homodyne_bound(d).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
  std::vector<double> xs, ys;
  for (double d : d_grid(4.0, 5.0, 0.1)) {
    xs.push_back(d);
    ys.push_back(homodyne_bound(d).value);
  }
  EXPECT_NEAR(least_squares_slope(xs, ys) / std::sqrt(std::numbers::e / 2), 1.0, 0.03);
}

TEST(Homodyne, OptimalVarianceIsPhysical) {
  for (double d : d_grid(0.0, 5.0, 0.1)) EXPECT_TRUE(xopt_inequality_check(d)) << "d=" << d;
}

TEST(Figures, Fig4OrderingAndEmptyGrid) {
  const auto rows = fig4_data(0.0, d_grid(0.0, 5.0, 0.1));
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0].relent_bound, 0.0);
  EXPECT_EQ(rows[0].homodyne_bound, 0.0);
  for (const auto& r : rows) {
    if (r.d >= 0.6 - 1e-12) EXPECT_GE(r.homodyne_bound, r.relent_bound) << "d=" << r.d;
  }
  EXPECT_TRUE(fig4_data(0.0, {}).empty());
  EXPECT_TRUE(fig3_data({}).empty());
}

TEST(Figures, Fig3SlopeAndOptimizerRow) {
  std::vector<int> ns;
  for (int n = 5; n <= 30; ++n) ns.push_back(n);
  Fig3Config closed;
  closed.optimize = false;
  const auto rows = fig3_data(ns, closed);
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    EXPECT_TRUE(std::isnan(r.optimizer_value));
    xs.push_back(r.n);
    ys.push_back(r.closed_form);
  }
  EXPECT_NEAR(least_squares_slope(xs, ys) / std::numbers::e, 1.0, 0.02);

  Fig3Config cfg;
  cfg.optimizer.starts = 4;
  const auto one = fig3_data({1}, cfg);
  EXPECT_EQ(one[0].closed_form, 3.0);
  EXPECT_LT(one[0].rel_err, 0.01);
}

TEST(Figures, SlopeRejectsDegenerateInput) {
  EXPECT_THROW(least_squares_slope({1.0}, {2.0}), InvalidArgument);
  EXPECT_THROW(least_squares_slope({1.0, 1.0}, {2.0, 3.0}), InvalidArgument);
  EXPECT_NEAR(least_squares_slope({0, 1, 2}, {1, 3, 5}), 2.0, 1e-15);
}

}  // namespace
}  // namespace cvrl
