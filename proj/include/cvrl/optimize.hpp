#pragma once

// Derivative-free minimization over single-mode Gaussian parameters.
//
// The search space is (nbar, r, phi, Re alpha, Im alpha) inside a box; phi is
// periodic. Objectives may return kInfinity for infeasible points. Each start
// runs a box-clamped Nelder-Mead simplex; starts are independent and may run
// on several threads, and the reduction orders by (value, start index) so the
// result does not depend on the worker count.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvrl/gaussian.hpp"

namespace cvrl {

struct ParameterBox {
  double nbar_max = 20.0;
  double r_max = 2.0;
  double alpha_max = 6.0;
};

struct OptimizerConfig {
  int starts = 12;
  int max_evals = 2000;
  double xtol = 1e-7;
  double ftol = 1e-10;
  std::uint64_t seed = 20240611;
  ParameterBox box;
  std::vector<GaussianParams> extra_seeds;
  // 0 means "use worker_count()".
  int threads = 0;
  // Candidate sigmas losing more than this to truncation are infeasible.
  double max_sigma_tail = 1e-6;
};

enum class OptimizerStatus { kConverged, kBudgetExhausted };

std::string to_string(OptimizerStatus s);

struct StartRecord {
  int index = 0;
  GaussianParams start;
  GaussianParams best;
  double value = kInfinity;
  int evals = 0;
  bool converged = false;
};

struct MultistartResult {
  double value = kInfinity;
  GaussianParams argmin;
  std::vector<StartRecord> log;
  OptimizerStatus status = OptimizerStatus::kBudgetExhausted;
};

using GaussianObjective = std::function<double(const GaussianParams&)>;

/// Number of workers: hardware concurrency, capped by CVRL_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0: worker_count()).
/// Exceptions from body are rethrown in index order after all workers join.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// Clamps into the box and wraps phi into [0, 2 pi).
GaussianParams clamp_to_box(const GaussianParams& p, const ParameterBox& box);

/// Start points: reference, vacuum, cfg.extra_seeds, then seeded random
/// perturbations of the reference until cfg.starts points exist.
std::vector<GaussianParams> start_points(const GaussianParams& reference,
                                         const OptimizerConfig& cfg);

/// Single Nelder-Mead run from `start`.
StartRecord nelder_mead(const GaussianObjective& f, const GaussianParams& start,
                        const OptimizerConfig& cfg);

MultistartResult minimize_gaussian(const GaussianObjective& f, const GaussianParams& reference,
                                   const OptimizerConfig& cfg);

}  // namespace cvrl
