#include "cvrl/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

namespace cvrl {

namespace {

constexpr int kBrentBits = 50;

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidDimension(fmt::format("shape mismatch: {} vs {}", a.rows(), b.rows()));
  }
}

// sigma restricted to eigenvalues above the floor.
struct Support {
  Matrix basis;        // columns: eigenvectors kept
  RealVector values;   // matching eigenvalues
};

Support support_of(const Matrix& sigma, double floor) {
  const Eigensystem es = hermitian_eigen(sigma);
  const Eigen::Index n = es.values.size();
  Eigen::Index first = 0;
  while (first < n && es.values(first) <= floor) ++first;
  return {es.vectors.rightCols(n - first), es.values.tail(n - first)};
}

// Weight of rho outside span(basis).
double leaked_weight(const Matrix& rho, const Matrix& projected) {
  return rho.trace().real() - projected.trace().real();
}

Matrix whitened(const Support& s, const Matrix& rho_in_support) {
  const RealVector inv_sqrt = s.values.cwiseSqrt().cwiseInverse();
  return inv_sqrt.cast<Complex>().asDiagonal() * rho_in_support *
         inv_sqrt.cast<Complex>().asDiagonal();
}

}  // namespace

double dmax(const Matrix& rho, const Matrix& sigma, double floor) {
  require_same_shape(rho, sigma);
  const Support s = support_of(sigma, floor);
  if (s.values.size() == 0) return kInfinity;
  const Matrix inside = s.basis.adjoint() * rho * s.basis;
  if (leaked_weight(rho, inside) > 10.0 * floor) return kInfinity;
  const Eigensystem es = hermitian_eigen(whitened(s, inside));
  const Eigen::Index last = es.values.size() - 1;
  // Generalized Rayleigh quotient on the unwhitened pair: its error is
  // quadratic in the eigenvector error, while the whitened eigenvalue carries
  // the full condition number of sigma.
  const Vector x = s.basis * (s.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                              es.vectors.col(last));
  const double num = x.dot(rho * x).real();
  const double den = x.dot(sigma * x).real();
  const double top = den > 0.0 && num > 0.0 ? num / den : es.values(last);
  return std::log(top);
}

double dmax(const DensityState& rho, const DensityState& sigma, double floor) {
  return dmax(rho.matrix(), sigma.matrix(), floor);
}

double rel_entropy(const DensityState& rho, const DensityState& sigma, double floor) {
  require_same_shape(rho.matrix(), sigma.matrix());
  const Support s = support_of(sigma.matrix(), floor);
  const Matrix inside = s.basis.adjoint() * rho.matrix() * s.basis;
  if (leaked_weight(rho.matrix(), inside) > 10.0 * floor) return kInfinity;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    cross -= inside(k, k).real() * std::log(s.values(k));
  }
  return cross - von_neumann_entropy(rho);
}

double rel_entropy_nongaussianity(const DensityState& rho) {
  return gaussian_entropy(moments_of(rho)) - von_neumann_entropy(rho);
}

double robustness_fixed(const DensityState& rho, const GaussianParams& sigma, double max_tail) {
  if (rho.modes() != 1) throw InvalidDimension("single-mode state required");
  const DensityState s = synthesize(sigma, rho.cutoff(), max_tail);
  return std::expm1(dmax(rho, s));
}

RobustnessResult robustness_gaussian(const DensityState& rho, const OptimizerConfig& cfg) {
  if (rho.modes() != 1) throw InvalidDimension("single-mode state required");
  const Matrix& target = rho.matrix();
  const int cutoff = rho.cutoff();
  const GaussianObjective objective = [&](const GaussianParams& p) {
    const SynthesizedMatrix sigma = synthesize_matrix(p, cutoff);
    if (sigma.tail_mass > cfg.max_sigma_tail) return kInfinity;
    if (sigma.rho.trace().real() > 1.0 + 1e-9) return kInfinity;
    return dmax(target, sigma.rho);
  };
  const MultistartResult found = minimize_gaussian(objective, reference_gaussian(rho), cfg);
  if (!std::isfinite(found.value)) {
    throw NoFeasibleSigma(fmt::format(
        "no Gaussian with rho in its support found at cutoff {} ({} starts)", cutoff,
        found.log.size()));
  }
  RobustnessResult out;
  out.dmax = found.value;
  out.value = std::max(0.0, std::expm1(found.value));
  out.argmin = found.argmin;
  out.multistart_log = found.log;
  out.status = found.status;
  return out;
}

double pure_robustness_fixed(const Vector& psi, const GaussianParams& sigma, double max_tail) {
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) throw InvalidState("state vector not normalized");
  const DensityState s = synthesize(sigma, static_cast<int>(psi.size()), max_tail);
  const Support sup = support_of(s.matrix(), kSupportFloor);
  const Vector coeffs = sup.basis.adjoint() * psi;
  if (1.0 - coeffs.squaredNorm() > 10.0 * kSupportFloor) return kInfinity;
  double total = 0.0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) total += std::norm(coeffs(k)) / sup.values(k);
  return total - 1.0;
}

double multi_copy_robustness(double robustness, int copies) {
  if (robustness < 0.0) throw InvalidArgument("robustness must be >= 0");
  if (copies < 1) throw InvalidArgument("copies must be >= 1");
  if (copies == 1) return robustness;
  return std::pow(1.0 + robustness, copies) - 1.0;
}

FockOperator optimal_observable(const DensityState& rho, const DensityState& sigma,
                                double floor) {
  require_same_shape(rho.matrix(), sigma.matrix());
  const Support s = support_of(sigma.matrix(), floor);
  const Matrix inside = s.basis.adjoint() * rho.matrix() * s.basis;
  if (s.values.size() == 0 || leaked_weight(rho.matrix(), inside) > 10.0 * floor) {
    throw SupportError("rho has weight outside the support of sigma");
  }
  const Eigensystem es = hermitian_eigen(whitened(s, inside));
  const Vector top = es.vectors.col(es.vectors.cols() - 1);
  Vector w = s.basis * (s.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * top);
  w /= w.norm();
  const Matrix proj = w * w.adjoint();
  return FockOperator(rho.cutoff(), rho.modes(), 0.5 * (proj + proj.adjoint()), true);
}

double homodyne_inner_minimum(double density, double x, const HomodyneConfig& cfg,
                              double* argmin) {
  if (density <= 0.0) {
    if (argmin) *argmin = cfg.variance_min;
    return 0.0;
  }
  const double gap2 = (x - cfg.mean) * (x - cfg.mean);
  // log of sqrt(a) exp(gap^2 / a), minimized over log a.
  const auto log_ratio = [gap2](double log_a) { return 0.5 * log_a + gap2 * std::exp(-log_a); };
  const auto [log_a, value] = boost::math::tools::brent_find_minima(
      log_ratio, std::log(cfg.variance_min), std::log(cfg.variance_max), kBrentBits);
  double best_log_a = log_a, best = value;
  // Brent never evaluates the endpoints; the lower one is the common optimum.
  const double at_min = log_ratio(std::log(cfg.variance_min));
  if (at_min <= best) {
    best = at_min;
    best_log_a = std::log(cfg.variance_min);
  }
  if (argmin) *argmin = std::exp(best_log_a);
  return density * std::sqrt(std::numbers::pi) * std::exp(best);
}

HomodyneBound lower_bound_homodyne(const std::function<double(double)>& marginal,
                                   const HomodyneConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.x_max > cfg.x_min)) throw InvalidArgument("empty x-grid");
  const auto score = [&](double x) { return homodyne_inner_minimum(marginal(x), x, cfg); };
  const int steps = static_cast<int>(std::floor((cfg.x_max - cfg.x_min) / cfg.step + 1e-9));
  double best_x = cfg.x_min, best = score(cfg.x_min);
  for (int i = 1; i <= steps; ++i) {
    const double x = cfg.x_min + i * cfg.step;
    const double v = score(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double lo = std::max(cfg.x_min, best_x - cfg.step);
  const double hi = std::min(cfg.x_max, best_x + cfg.step);
  const auto [x_ref, neg] =
      boost::math::tools::brent_find_minima([&](double x) { return -score(x); }, lo, hi, kBrentBits);
  if (-neg > best) {
    best = -neg;
    best_x = x_ref;
  }
  HomodyneBound out;
  out.x_opt = best_x;
  homodyne_inner_minimum(marginal(best_x), best_x, cfg, &out.variance_opt);
  out.value = std::max(0.0, best - 1.0);
  return out;
}

}  // namespace cvrl
