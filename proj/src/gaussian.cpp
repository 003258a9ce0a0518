#include "cvrl/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace cvrl {

namespace {

constexpr double kBonaFideTolerance = 1e-9;

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return rot;
}

void require_single_mode(const DensityState& rho) {
  if (rho.modes() != 1) throw InvalidDimension("single-mode state required");
}

}  // namespace

Eigen::MatrixXd symplectic_form(int modes) {
  if (modes < 1) throw InvalidDimension("symplectic form needs modes >= 1");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

bool bona_fide_check(const Eigen::MatrixXd& V) {
  if (V.rows() != V.cols() || V.rows() % 2 != 0 || V.rows() == 0) {
    throw InvalidDimension("covariance must be square with even side");
  }
  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
  if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("covariance matrix is not symmetric");
  }
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(V.rows() / 2));
  const Matrix h = V.cast<Complex>() + Complex(0.0, 1.0) * omega.cast<Complex>();
  return hermitian_eigenvalues(h).minCoeff() >= -kBonaFideTolerance;
}

MomentForm params_to_moments(const GaussianParams& p) {
  if (!(p.nbar >= 0.0) || !(p.r >= 0.0)) {
    throw BonaFideViolation(fmt::format("nbar={} r={} must be >= 0", p.nbar, p.r));
  }
  MomentForm m;
  m.mu << std::sqrt(2.0) * p.alpha.real(), std::sqrt(2.0) * p.alpha.imag();
  const Eigen::Matrix2d rot = rotation(0.5 * p.phi);
  const Eigen::Vector2d diag(std::exp(-2.0 * p.r), std::exp(2.0 * p.r));
  m.V = (2.0 * p.nbar + 1.0) * rot * diag.asDiagonal() * rot.transpose();
  return m;
}

GaussianParams moments_to_params(const MomentForm& m) {
  if (!bona_fide_check(m.V)) throw BonaFideViolation("covariance violates V + iΩ >= 0");
  GaussianParams p;
  const Eigen::Matrix2d V = 0.5 * (m.V + m.V.transpose());
  const double nu = std::sqrt(std::max(V.determinant(), 0.0));
  p.nbar = std::max(0.0, 0.5 * (nu - 1.0));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(V);
  const Eigen::Vector2d lam = solver.eigenvalues();
  p.r = 0.25 * std::log(lam(1) / lam(0));
  if (p.r < 1e-12) {
    p.r = 0.0;
    p.phi = 0.0;
  } else {
    const Eigen::Vector2d v = solver.eigenvectors().col(0);
    double phi = 2.0 * std::atan2(v(1), v(0));
    phi = std::fmod(phi, 2.0 * std::numbers::pi);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    p.phi = phi;
  }
  p.alpha = Complex(m.mu(0), m.mu(1)) / std::sqrt(2.0);
  return p;
}

Matrix gaussian_unitary_elements(Complex alpha, double r, double phi, int rows, int cols) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  const double t = std::tanh(r);
  const Complex e = std::polar(1.0, phi);
  const Complex ac = std::conj(alpha);
  const Complex drive = alpha + e * t * ac;
  const Complex et = e * t;
  const Complex es = std::conj(e) * s;

  std::vector<double> sq(static_cast<std::size_t>(std::max(rows, cols)) + 1);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::sqrt(static_cast<double>(i));

  Matrix g = Matrix::Zero(rows, cols);
  g(0, 0) = std::exp(-0.5 * std::norm(alpha) - 0.5 * ac * ac * et) / std::sqrt(c);
  for (int n = 0; n < cols; ++n) {
    if (n > 0) {
      Complex top = -ac * g(0, n - 1);
      if (n >= 2) top += es * sq[n - 1] * g(0, n - 2);
      g(0, n) = top / (c * sq[n]);
    }
    for (int m = 0; m + 1 < rows; ++m) {
      Complex next = drive * g(m, n);
      if (m >= 1) next -= et * sq[m] * g(m - 1, n);
      if (n >= 1) next += (sq[n] / c) * g(m, n - 1);
      g(m + 1, n) = next / sq[m + 1];
    }
  }
  return g;
}

SynthesizedMatrix synthesize_matrix(const GaussianParams& p, int cutoff) {
  if (cutoff < 2) throw InvalidDimension("cutoff must be >= 2");
  const MomentForm mf = params_to_moments(p);

  // <beta|sigma|gamma> e^{(|beta|^2 + |gamma|^2)/2} = T exp(v^T A v / 2 + b^T v)
  // with v = (conj(beta), gamma), read off from the Husimi function whose
  // covariance is V + I. Coefficients of that series give the recurrence
  //   sigma(m+1,n) = [b1 sigma(m,n) + A11 sqrt(m) sigma(m-1,n)
  //                   + A12 sqrt(n) sigma(m,n-1)] / sqrt(m+1).
  const Eigen::Matrix2d husimi = mf.V + Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d prec = husimi.inverse();
  const double p11 = prec(0, 0), p12 = prec(0, 1), p22 = prec(1, 1);
  const double m1 = mf.mu(0), m2 = mf.mu(1);
  const Complex i(0.0, 1.0);
  const Complex a11 = -p11 - 2.0 * i * p12 + p22;
  const Complex a22 = std::conj(a11);
  const double a12 = 1.0 - p11 - p22;
  const Complex b1 = std::sqrt(2.0) * (m1 * p11 + i * m1 * p12 + m2 * p12 + i * m2 * p22);
  const Complex b2 = std::conj(b1);
  const double quad = m1 * m1 * p11 + 2.0 * m1 * m2 * p12 + m2 * m2 * p22;

  std::vector<double> sq(static_cast<std::size_t>(cutoff) + 1);
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::sqrt(static_cast<double>(k));

  Matrix rho(cutoff, cutoff);
  rho(0, 0) = 2.0 * std::exp(-quad) / std::sqrt(husimi.determinant());
  for (int n = 0; n + 1 < cutoff; ++n) {
    Complex v = b2 * rho(0, n);
    if (n >= 1) v += a22 * sq[n] * rho(0, n - 1);
    rho(0, n + 1) = v / sq[n + 1];
  }
  for (int m = 0; m + 1 < cutoff; ++m) {
    for (int n = 0; n < cutoff; ++n) {
      Complex v = b1 * rho(m, n);
      if (m >= 1) v += a11 * sq[m] * rho(m - 1, n);
      if (n >= 1) v += a12 * sq[n] * rho(m, n - 1);
      rho(m + 1, n) = v / sq[m + 1];
    }
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tail = std::max(0.0, 1.0 - rho.trace().real());
  return {std::move(rho), tail};
}

DensityState synthesize(const GaussianParams& p, int cutoff, double max_tail) {
  auto [rho, tail] = synthesize_matrix(p, cutoff);
  if (tail > max_tail) {
    throw CutoffTooSmall(fmt::format(
        "cutoff {} drops {:.3e} of the Gaussian state (nbar={}, r={}, |alpha|={}); guard {:.1e}",
        cutoff, tail, p.nbar, p.r, std::abs(p.alpha), max_tail));
  }
  return DensityState::trusted(FockOperator(cutoff, 1, std::move(rho), true), tail);
}

MomentForm moments_of(const DensityState& rho) {
  require_single_mode(rho);
  const Matrix& m = rho.matrix();
  const int n = static_cast<int>(m.rows());
  Complex a1 = 0.0, a2 = 0.0;
  double number = 0.0;
  for (int k = 0; k < n; ++k) {
    number += k * m(k, k).real();
    if (k >= 1) a1 += std::sqrt(static_cast<double>(k)) * m(k, k - 1);
    if (k >= 2) a2 += std::sqrt(static_cast<double>(k) * (k - 1)) * m(k, k - 2);
  }
  MomentForm out;
  const double xm = std::sqrt(2.0) * a1.real();
  const double ym = std::sqrt(2.0) * a1.imag();
  out.mu << xm, ym;
  const double xx = 0.5 * (2.0 * a2.real() + 2.0 * number + 1.0);
  const double yy = 0.5 * (-2.0 * a2.real() + 2.0 * number + 1.0);
  const double sym_xy = 2.0 * a2.imag();
  out.V(0, 0) = 2.0 * (xx - xm * xm);
  out.V(1, 1) = 2.0 * (yy - ym * ym);
  out.V(0, 1) = out.V(1, 0) = sym_xy - 2.0 * xm * ym;
  return out;
}

GaussianParams reference_gaussian(const DensityState& rho) {
  return moments_to_params(moments_of(rho));
}

double gaussian_wigner(const MomentForm& m, double x, double y) {
  const double det = m.V.determinant();
  if (!(det > 0.0)) throw InvalidArgument("singular covariance matrix");
  const Eigen::Vector2d d = Eigen::Vector2d(x, y) - m.mu;
  const double q = d.dot(m.V.inverse() * d);
  return std::exp(-q) / (std::numbers::pi * std::sqrt(det));
}

double gaussian_marginal(const MomentForm& m, double x) {
  const double a = m.V(0, 0);
  if (!(a > 0.0)) throw InvalidArgument("non-positive x variance");
  const double dx = x - m.mu(0);
  return std::exp(-dx * dx / a) / std::sqrt(std::numbers::pi * a);
}

double gaussian_entropy(const MomentForm& m, LogBase base) {
  if (!bona_fide_check(m.V)) throw BonaFideViolation("covariance violates V + iΩ >= 0");
  const double nu_tilde = std::sqrt(std::max(m.V.determinant(), 1.0));
  const double nu = 0.5 * (nu_tilde - 1.0);
  double s = (1.0 + nu) * std::log1p(nu);
  if (nu > 0.0) s -= nu * std::log(nu);
  return base == LogBase::kBits ? s / std::log(2.0) : s;
}

double quadrature_density(const DensityState& rho, double x) {
  require_single_mode(rho);
  const int n = static_cast<int>(rho.side());
  RealVector psi(n);
  psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int k = 1; k + 1 < n; ++k) {
    psi(k + 1) = std::sqrt(2.0 / (k + 1)) * x * psi(k) - std::sqrt(static_cast<double>(k) / (k + 1)) * psi(k - 1);
  }
  const Vector v = psi.cast<Complex>();
  return (v.transpose() * rho.matrix() * v).value().real();
}

}  // namespace cvrl
