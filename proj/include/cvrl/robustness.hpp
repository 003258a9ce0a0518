#pragma once

// Max-relative entropy, relative entropy and the generalized robustness of
// non-Gaussianity.
//
// Everything is evaluated against the projection P sigma P of a Gaussian onto
// the truncated space. Since rho = P rho P, dmax(rho || P sigma P) is never
// larger than the untruncated value, so cutoffs are checked by doubling.

#include <functional>
#include <string>
#include <vector>

#include "cvrl/fock.hpp"
#include "cvrl/gaussian.hpp"
#include "cvrl/optimize.hpp"

namespace cvrl {

inline constexpr double kSupportFloor = 1e-12;

// Truncation loss tolerated for the Gaussian side of a robustness evaluation.
inline constexpr double kRobustnessTailGuard = 1e-6;

/// log of the top eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on the
/// eigenspace where sigma > floor; kInfinity when rho puts more than
/// 10 * floor outside it.
double dmax(const DensityState& rho, const DensityState& sigma, double floor = kSupportFloor);
double dmax(const Matrix& rho, const Matrix& sigma, double floor = kSupportFloor);

/// tr[rho (log rho - log sigma)]; kInfinity under a support violation.
double rel_entropy(const DensityState& rho, const DensityState& sigma,
                   double floor = kSupportFloor);

/// S(reference Gaussian) - S(rho).
double rel_entropy_nongaussianity(const DensityState& rho);

/// exp(dmax(rho || sigma)) - 1 for one Gaussian sigma at rho's cutoff.
double robustness_fixed(const DensityState& rho, const GaussianParams& sigma,
                        double max_tail = kRobustnessTailGuard);

struct RobustnessResult {
  // Best value found; an upper estimate of the infimum over Gaussians.
  double value = kInfinity;
  GaussianParams argmin;
  double dmax = kInfinity;
  std::vector<StartRecord> multistart_log;
  OptimizerStatus status = OptimizerStatus::kBudgetExhausted;
};

/// Minimizes dmax(rho || sigma) over single-mode Gaussians. Throws
/// NoFeasibleSigma when every start stays at kInfinity.
RobustnessResult robustness_gaussian(const DensityState& rho, const OptimizerConfig& cfg = {});

/// <psi|sigma^{-1}|psi> - 1 on sigma's numerical support (cutoff = psi.size()).
double pure_robustness_fixed(const Vector& psi, const GaussianParams& sigma,
                             double max_tail = kRobustnessTailGuard);

/// (1 + R)^m - 1.
double multi_copy_robustness(double robustness, int copies);

/// Rank-1 projector onto sigma^{-1/2} v, v the top eigenvector of
/// sigma^{-1/2} rho sigma^{-1/2}; tr[rho X] / tr[sigma X] = exp(dmax).
FockOperator optimal_observable(const DensityState& rho, const DensityState& sigma,
                                double floor = kSupportFloor);

struct HomodyneConfig {
  double x_min = -10.0;
  double x_max = 10.0;
  double step = 0.01;
  // Mean of the Gaussian marginal in the inner problem. The infimum over a
  // free mean collapses to sqrt(pi) p(x), which never exceeds 1 for the
  // states of interest, so the mean is pinned (the first moment of rho).
  double mean = 0.0;
  double variance_min = 1.0;
  double variance_max = 1e6;
};

struct HomodyneBound {
  double value = 0.0;  // clipped at 0
  double x_opt = 0.0;
  double variance_opt = 1.0;
};

/// min over a in [variance_min, variance_max] of p(x) / g_a(x), where g_a is
/// the Gaussian marginal with the pinned mean and variance a/2.
double homodyne_inner_minimum(double density, double x, const HomodyneConfig& cfg,
                              double* argmin = nullptr);

/// sup_x of the inner minimum, minus 1, from a grid scan refined by Brent.
HomodyneBound lower_bound_homodyne(const std::function<double(double)>& marginal,
                                   const HomodyneConfig& cfg = {});

}  // namespace cvrl
