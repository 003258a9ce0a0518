#include "cvrl/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "test_support.hpp"

namespace cvrl {
namespace {

constexpr double kPi = std::numbers::pi;

// Independent route: D(alpha) S(zeta) tau S^dagger D^dagger built from matrix
// exponentials of ladder operators in a padded space, then projected.
Matrix expm_gaussian(const GaussianParams& p, int cutoff, int padded) {
  auto [a_op, ad_op] = ladder_ops(padded);
  const Matrix a = a_op.matrix();
  const Matrix ad = ad_op.matrix();
  const Complex zeta = std::polar(p.r, p.phi);
  const Matrix squeeze_gen = 0.5 * (std::conj(zeta) * a * a - zeta * ad * ad);
  const Matrix disp_gen = p.alpha * ad - std::conj(p.alpha) * a;
  const Matrix s = squeeze_gen.exp();
  const Matrix d = disp_gen.exp();
  Matrix tau = Matrix::Zero(padded, padded);
  for (int k = 0; k < padded; ++k) {
    tau(k, k) = std::pow(p.nbar / (p.nbar + 1.0), k) / (p.nbar + 1.0);
  }
  const Matrix u = d * s;
  return (u * tau * u.adjoint()).topLeftCorner(cutoff, cutoff);
}

TEST(Symplectic, SingleModeForm) {
  const Eigen::MatrixXd omega = symplectic_form(1);
  Eigen::Matrix2d expected;
  expected << 0, 1, -1, 0;
  EXPECT_EQ(omega, Eigen::MatrixXd(expected));
  const Eigen::MatrixXd o3 = symplectic_form(3);
  EXPECT_EQ(o3 * o3, -Eigen::MatrixXd::Identity(6, 6));
  EXPECT_EQ(o3.transpose(), -o3);
}

TEST(BonaFide, ReferenceCases) {
  EXPECT_TRUE(bona_fide_check(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_FALSE(bona_fide_check(0.5 * Eigen::MatrixXd::Identity(2, 2)));
  for (double x2 : {0.5, 0.8, 2.0, 10.0}) {
    Eigen::MatrixXd v(2, 2);
    v << 2 * x2, 0, 0, 1;
    EXPECT_TRUE(bona_fide_check(v)) << x2;
  }
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  EXPECT_THROW(bona_fide_check(asym), InvalidArgument);
}

TEST(BonaFide, InvariantUnderRotations) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const double scale = 0.6 + 0.1 * (trial % 8);
    Eigen::Matrix2d v;
    v << scale * 2.0, 0.0, 0.0, scale * 0.6;
    const double th = u(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Eigen::MatrixXd rotated = rot * v * rot.transpose();
    EXPECT_EQ(bona_fide_check(v), bona_fide_check(rotated));
  }
}

TEST(Moments, ReferenceConversions) {
  const auto vac = params_to_moments(GaussianParams::vacuum());
  EXPECT_EQ(vac.mu, Eigen::Vector2d::Zero());
  EXPECT_LT((vac.V - Eigen::Matrix2d::Identity()).norm(), 1e-15);
  EXPECT_LT((params_to_moments(GaussianParams::thermal(1.0)).V - 3 * Eigen::Matrix2d::Identity())
                .norm(),
            1e-15);
  const double d = 1.7;
  const auto coh = params_to_moments(GaussianParams::coherent({d / std::sqrt(2.0), 0.0}));
  EXPECT_NEAR(coh.mu(0), d, 1e-15);
  EXPECT_NEAR(coh.mu(1), 0.0, 1e-15);
}

TEST(Moments, RoundTripOnRandomParams) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    GaussianParams p{3 * u(rng), 1.5 * u(rng) + 1e-3, 2 * kPi * u(rng),
                     {4 * u(rng) - 2, 4 * u(rng) - 2}};
    const auto back = moments_to_params(params_to_moments(p));
    EXPECT_NEAR(back.nbar, p.nbar, 1e-9);
    EXPECT_NEAR(back.r, p.r, 1e-9);
    EXPECT_NEAR(std::remainder(back.phi - p.phi, 2 * kPi), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(back.alpha - p.alpha), 0.0, 1e-9);
  }
}

TEST(Moments, RejectsUnphysicalCovariance) {
  MomentForm m;
  m.V = 0.5 * Eigen::Matrix2d::Identity();
  EXPECT_THROW(moments_to_params(m), BonaFideViolation);
  EXPECT_THROW(gaussian_entropy(m), BonaFideViolation);
}

TEST(Synthesize, ThermalDiagonal) {
  for (double n : {0.5, 1.0, 3.0}) {
    const auto rho = synthesize(GaussianParams::thermal(n), 120);
    for (int m = 0; m < 10; ++m) {
      EXPECT_NEAR(rho.matrix()(m, m).real(), std::pow(n / (n + 1), m) / (n + 1), 1e-15);
    }
    EXPECT_NEAR(rho.tail_mass(), std::pow(n / (n + 1), 120), 1e-14);
  }
}

TEST(Synthesize, CoherentPoisson) {
  const double d = 2.0;
  const auto rho = synthesize(GaussianParams::coherent({d / std::sqrt(2.0), 0.0}), 40);
  double fact = 1.0;
  for (int m = 0; m < 20; ++m) {
    if (m > 0) fact *= m;
    const double expected = std::exp(-d * d / 2) * std::pow(d * d / 2, m) / fact;
    EXPECT_NEAR(rho.matrix()(m, m).real(), expected, 1e-14);
  }
}

TEST(Synthesize, VacuumIsProjector) {
  const auto rho = synthesize(GaussianParams::vacuum(), 5);
  Matrix expected = Matrix::Zero(5, 5);
  expected(0, 0) = 1.0;
  EXPECT_EQ(rho.matrix(), expected);
  EXPECT_EQ(rho.tail_mass(), 0.0);
}

TEST(Synthesize, AgreesWithPaddedMatrixExponential) {
  const std::vector<GaussianParams> cases = {
      {0.0, 0.4, 0.0, {0.0, 0.0}},
      {0.0, 0.3, 1.1, {0.7, -0.4}},
      {0.8, 0.5, 2.5, {-0.3, 0.9}},
      {1.5, 0.2, 4.0, {1.2, 0.1}},
  };
  for (const auto& p : cases) {
    const int cutoff = 20;
    const Matrix fast = synthesize_matrix(p, cutoff).rho;
    const Matrix oracle = expm_gaussian(p, cutoff, 160);
    EXPECT_LT((fast - oracle).cwiseAbs().maxCoeff(), 1e-10)
        << "nbar=" << p.nbar << " r=" << p.r << " phi=" << p.phi;
  }
}

TEST(UnitaryElements, AgreesWithPaddedMatrixExponential) {
  const Complex alpha(0.6, -0.3);
  const double r = 0.4, phi = 2.2;
  auto [a_op, ad_op] = ladder_ops(160);
  const Matrix a = a_op.matrix(), ad = ad_op.matrix();
  const Complex zeta = std::polar(r, phi);
  const Matrix u = (alpha * ad - std::conj(alpha) * a).exp() *
                   (0.5 * (std::conj(zeta) * a * a - zeta * ad * ad)).exp();
  const Matrix fast = gaussian_unitary_elements(alpha, r, phi, 20, 4);
  EXPECT_LT((fast - u.topLeftCorner(20, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Synthesize, StableAtBoxCorners) {
  for (double nbar : {0.0, 20.0}) {
    for (double r : {0.0, 2.0}) {
      for (double amp : {0.0, 6.0}) {
        const auto s = synthesize_matrix({nbar, r, 2.1, {0.6 * amp, -0.8 * amp}}, 120);
        EXPECT_TRUE(s.rho.allFinite());
        EXPECT_LE(s.rho.trace().real(), 1.0 + 1e-12);
        EXPECT_GE(hermitian_eigenvalues(s.rho).minCoeff(), -1e-12);
      }
    }
  }
}

TEST(Synthesize, CutoffGuard) {
  EXPECT_THROW(synthesize(GaussianParams::thermal(5.0), 20), CutoffTooSmall);
  EXPECT_NO_THROW(synthesize(GaussianParams::thermal(5.0), 20, 1.0));
}

TEST(Synthesize, MomentsMatchParameters) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    GaussianParams p{u(rng), 0.5 * u(rng) + 0.05, 2 * kPi * u(rng),
                     {3 * u(rng) - 1.5, 3 * u(rng) - 1.5}};
    const auto rho = synthesize(p, 110);
    const auto measured = moments_of(rho);
    const auto expected = params_to_moments(p);
    EXPECT_LT((measured.mu - expected.mu).norm(), 1e-6);
    EXPECT_LT((measured.V - expected.V).norm(), 1e-6);
    const auto back = reference_gaussian(rho);
    EXPECT_NEAR(back.nbar, p.nbar, 1e-5);
    EXPECT_NEAR(back.r, p.r, 1e-5);
    EXPECT_NEAR(std::abs(back.alpha - p.alpha), 0.0, 1e-5);
  }
}

TEST(MomentsOf, FockStates) {
  EXPECT_LT((moments_of(DensityState::fock(0, 4)).V - Eigen::Matrix2d::Identity()).norm(), 1e-15);
  for (int n = 1; n <= 5; ++n) {
    const auto m = moments_of(DensityState::fock(n, 12));
    EXPECT_LT(m.mu.norm(), 1e-15);
    EXPECT_LT((m.V - (2 * n + 1) * Eigen::Matrix2d::Identity()).norm(), 1e-13);
    const auto ref = reference_gaussian(DensityState::fock(n, 12));
    EXPECT_NEAR(ref.nbar, n, 1e-13);
    EXPECT_EQ(ref.r, 0.0);
  }
}

TEST(MomentsOf, GaussianFixedPoint) {
  const GaussianParams p{0.7, 0.4, 1.3, {0.5, -0.2}};
  const auto ref = reference_gaussian(synthesize(p, 90));
  EXPECT_NEAR(ref.nbar, p.nbar, 1e-6);
  EXPECT_NEAR(ref.r, p.r, 1e-6);
  EXPECT_NEAR(ref.phi, p.phi, 1e-6);
  EXPECT_NEAR(std::abs(ref.alpha - p.alpha), 0.0, 1e-6);
}

TEST(Wigner, PeakValues) {
  EXPECT_NEAR(gaussian_wigner(MomentForm{}, 0.0, 0.0), 1.0 / kPi, 1e-15);
  MomentForm coh;
  coh.mu << 1.3, 0.0;
  EXPECT_NEAR(gaussian_wigner(coh, 1.3, 0.0), 1.0 / kPi, 1e-15);
}

// 2-D trapezoid quadrature over a 6-sigma window.
TEST(Wigner, IntegratesToOne) {
  const auto m = params_to_moments({0.5, 0.3, 0.9, {0.4, -0.6}});
  const double sx = std::sqrt(m.V(0, 0) / 2), sy = std::sqrt(m.V(1, 1) / 2);
  const int steps = 600;
  const double hx = 12 * sx / steps, hy = 12 * sy / steps;
  double total = 0.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double x = m.mu(0) - 6 * sx + i * hx;
      const double y = m.mu(1) - 6 * sy + j * hy;
      const double w = (i == 0 || i == steps ? 0.5 : 1.0) * (j == 0 || j == steps ? 0.5 : 1.0);
      total += w * gaussian_wigner(m, x, y);
    }
  }
  EXPECT_NEAR(total * hx * hy, 1.0, 1e-6);
}

TEST(Wigner, MarginalMatchesFockQuadrature) {
  const GaussianParams p{0.3, 0.2, 0.7, {0.6, 0.2}};
  const auto rho = synthesize(p, 80);
  const auto m = params_to_moments(p);
  for (double x = -4.0; x <= 4.0; x += 0.25) {
    EXPECT_NEAR(quadrature_density(rho, x), gaussian_marginal(m, x), 1e-9) << x;
  }
}

TEST(Entropy, GaussianReferenceValues) {
  EXPECT_NEAR(gaussian_entropy(MomentForm{}), 0.0, 1e-15);
  MomentForm thermal;
  thermal.V = 3 * Eigen::Matrix2d::Identity();
  EXPECT_NEAR(gaussian_entropy(thermal), std::log(4.0), 1e-14);
  EXPECT_NEAR(gaussian_entropy(thermal, LogBase::kBits), 2.0, 1e-14);
  const double d = 1.3;
  MomentForm v0d;
  v0d.V << 2 * d * d + 1, 0, 0, 1;
  const double nu = 0.5 * (-1 + std::sqrt(1 + 2 * d * d));
  EXPECT_NEAR(gaussian_entropy(v0d), (1 + nu) * std::log(1 + nu) - nu * std::log(nu), 1e-14);
}

TEST(Entropy, MatrixAndSymplecticRoutesAgree) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    GaussianParams p{1.5 * u(rng), 0.6 * u(rng), 2 * kPi * u(rng), {u(rng) - 0.5, u(rng) - 0.5}};
    const auto rho = synthesize(p, 160);
    EXPECT_NEAR(von_neumann_entropy(rho), gaussian_entropy(params_to_moments(p)), 1e-6)
        << "nbar=" << p.nbar << " r=" << p.r;
  }
}

}  // namespace
}  // namespace cvrl
