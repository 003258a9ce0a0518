#pragma once

// Binary channel discrimination tasks built from witnesses.
//
// For a witness W of rho, X = I - W / ||W|| and the two channels map an input
// eta^{⊗m} to the classical pairs (1/2 ± t / 2, 1/2 ∓ t / 2), t = tr[X eta^{⊗m}] / ||X||.
// Priors are (1/2, 1/2). Since tr[W sigma^{⊗m}] >= 0 on Gaussians, every
// Gaussian succeeds with probability at most (1 + 1 / ||X||) / 2, while rho
// exceeds that. ||W|| and ||X|| are full-space norms for two-copy witnesses.

#include <array>
#include <string>

#include "cvrl/fock.hpp"
#include "cvrl/gaussian.hpp"
#include "cvrl/optimize.hpp"
#include "cvrl/witness.hpp"

namespace cvrl {

struct DiscriminationTask {
  FockOperator X;  // truncated block of I - W / ||W||
  Matrix target;   // the rho of the underlying witness
  int copies = 2;
  double epsilon = 0.0;
  double w_norm = 0.0;
  // 1 - min eig(W) / ||W||; X has spectrum in [0, x_norm] with x_norm <= 2.
  double x_norm = 0.0;
  std::array<double, 2> prior{0.5, 0.5};
  std::string witness_hash;
  std::string description;
};

/// Throws InvalidArgument when ||W|| = 0.
DiscriminationTask task_from_witness(const WitnessReport& w);

/// tr[X eta^{⊗m}] with eta taken as living in the truncated space.
double task_expectation(const DiscriminationTask& t, const DensityState& eta);

/// tr[X sigma^{⊗2}] for the untruncated Gaussian (two-copy tasks only).
double task_expectation(const DiscriminationTask& t, const GaussianParams& sigma);

/// Output distributions {Psi_0(eta), Psi_1(eta)} over the outcomes {0, 1}.
using ChannelOutputs = std::array<std::array<double, 2>, 2>;
ChannelOutputs channel_outputs(const DiscriminationTask& t, const DensityState& eta);

/// Holevo-Helstrom value (1 + |tr[X eta^{⊗m}]| / ||X||) / 2.
double p_succ_binary(const DiscriminationTask& t, const DensityState& eta);
double p_succ_binary(const DiscriminationTask& t, const GaussianParams& sigma);

/// Success probability of an explicit two-outcome measurement
/// {diag(m0), I - diag(m0)} on the channel outputs.
double p_succ_with_povm(const ChannelOutputs& out, const std::array<double, 2>& prior,
                        const std::array<double, 2>& m0);

/// (1 + 1 / ||X||) / 2: no Gaussian input does better.
double analytic_cap(const DiscriminationTask& t);

struct GaussianSup {
  double value = 0.0;  // best found; a lower estimate of the supremum
  GaussianParams argmax;
  double cap = 0.0;
  OptimizerStatus status = OptimizerStatus::kBudgetExhausted;
};

/// Multistart maximization of p_succ over Gaussian inputs. Four-copy tasks
/// evaluate truncated Gaussians and skip those losing more than
/// cfg.max_sigma_tail.
GaussianSup gaussian_sup_p_succ(const DiscriminationTask& t, const OptimizerConfig& cfg = {});

/// p_succ(rho) / analytic_cap.
double advantage_ratio(const DiscriminationTask& t, const DensityState& rho);

/// (1 + R)^m, the ceiling on the m-copy advantage for robustness R.
double advantage_ceiling(double robustness, int copies);

struct SingleCopyAdvantage {
  double ratio = 0.0;  // tr[rho X] / tr[sigma X]
  FockOperator X;
  double rho_value = 0.0;
  double sigma_value = 0.0;
};

/// Best single-copy advantage over one fixed Gaussian, realized by
/// optimal_observable; ratio = 1 + robustness_fixed(rho, sigma).
SingleCopyAdvantage worst_case_single_copy(const DensityState& rho, const GaussianParams& sigma,
                                           double max_tail = 1e-6);

struct WorstCaseInfimum {
  double grid_value = kInfinity;  // min over the grid
  GaussianParams grid_argmin;
  double value = kInfinity;  // after multistart refinement seeded by the grid
  GaussianParams argmin;
  int grid_points = 0;
};

/// Infimum of the single-copy advantage over Gaussians: a grid in
/// (nbar, r, phi) around the reference mean, then multistart refinement.
/// Both values approach 1 + R from above.
WorstCaseInfimum worst_case_infimum(const DensityState& rho, int grid_per_axis = 8,
                                    const OptimizerConfig& cfg = {});

}  // namespace cvrl
