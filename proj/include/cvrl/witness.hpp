#pragma once

// Multi-copy witnesses of non-Gaussianity.
//
// W(rho, eps) = V_2 + (tr rho^2 - eps) I - 2 rho ⊗ I gives
// tr[W eta^{⊗2}] = tr[(rho - eta)^2] - eps for every density eta, and the
// hermitized four-copy operator gives the same with fourth powers. Both are
// stored on the truncated space; rho lives there exactly, so Gaussian probes
// are evaluated on the full space through purities and overlaps.

#include <cstdint>
#include <string>
#include <vector>

#include "cvrl/fock.hpp"
#include "cvrl/gaussian.hpp"
#include "cvrl/optimize.hpp"

namespace cvrl {

struct WitnessEvaluation {
  std::string label;
  double value;
};

struct WitnessReport {
  FockOperator W;
  Matrix target;  // the rho the witness was built for
  int copies = 2;
  double epsilon = 0.0;
  // Spectrum of the operator on the untruncated space (two-copy) or of the
  // stored matrix (four-copy, flagged in heuristic_flags).
  double op_norm = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::vector<WitnessEvaluation> evaluations;
  std::vector<std::string> heuristic_flags;
};

struct EpsilonEstimate {
  double epsilon;
  double min_trace_power;  // best tr[(rho - sigma)^k] found, k = 2 or 4
  GaussianParams closest;
};

/// tr[(rho - sigma)^2] on the full space; rho must be single-mode.
double hs_distance2_to_gaussian(const DensityState& rho, const GaussianParams& sigma);

/// Half the best Gaussian Hilbert-Schmidt distance squared found by the
/// multistart search. Throws IndistinguishableFromGaussian at <= 1e-10.
EpsilonEstimate epsilon_search(const DensityState& rho, const OptimizerConfig& cfg = {});
double epsilon_bound(const DensityState& rho, const OptimizerConfig& cfg = {});

/// Half the best tr[(rho - P sigma P)^4] found. For Hermitian A,
/// tr[(P A P)^4] <= tr[A^4], so truncation only lowers the value and any
/// epsilon below the untruncated infimum stays valid.
EpsilonEstimate quartic_epsilon_search(const DensityState& rho, const OptimizerConfig& cfg = {});

WitnessReport two_copy_witness(const DensityState& rho, double epsilon);

/// Throws ResourceError when cutoff^4 exceeds max_side.
WitnessReport four_copy_witness(const DensityState& rho, double epsilon,
                                std::int64_t max_side = kDefaultMaxSide);

/// tr[W eta^{⊗m}] through the stored matrix.
double witness_value(const WitnessReport& w, const DensityState& eta);

/// Appends (label, tr[W eta^{⊗m}]) to w.evaluations and returns the value.
double record_probe(WitnessReport& w, const std::string& label, const DensityState& eta);

/// (max{0, -tr[W rho^{⊗m}] / ||W||})^{1/m}.
double robustness_lower_from_witness(const DensityState& rho, const WitnessReport& w);

/// tr[W sigma^{⊗2}] for the untruncated Gaussian sigma, where W is the
/// two-copy witness of (rho, epsilon).
double two_copy_value_on_gaussian(const DensityState& rho, double epsilon,
                                  const GaussianParams& sigma);

struct SoundnessReport {
  double min_value = kInfinity;
  GaussianParams argmin;
  std::string argmin_source;
  int sobol_points = 0;
  int adversarial_points = 0;
  // Every probe is also evaluated through the stored matrix on P sigma P plus
  // the exact truncation correction; largest disagreement between routes.
  int cross_checked = 0;
  double max_route_gap = 0.0;
};

struct SoundnessConfig {
  int sobol_points = 500;
  int adversarial_starts = 50;
  double tolerance = 1e-8;
  OptimizerConfig optimizer;
};

/// Minimum of tr[W sigma^{⊗2}] over a seeded, shifted Sobol sample of the
/// parameter box plus the end points of an adversarial multistart search.
/// Throws WitnessViolation (naming the violating sigma) when the minimum is
/// below -tolerance.
SoundnessReport check_two_copy_soundness(const DensityState& rho, const WitnessReport& w,
                                         const SoundnessConfig& cfg = {});

}  // namespace cvrl
