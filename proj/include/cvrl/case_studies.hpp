#pragma once

// Closed forms and bounds for two families: Fock states and incoherent
// mixtures of two coherent states with amplitudes +-d/sqrt(2).

#include <vector>

#include <Eigen/Dense>

#include "cvrl/fock.hpp"
#include "cvrl/gaussian.hpp"
#include "cvrl/optimize.hpp"
#include "cvrl/robustness.hpp"

namespace cvrl {

/// (n+1)^{n+1} / n^n - 1, with 0^0 = 1.
double fock_robustness(int n);

/// prod_i (n_i+1)^{n_i+1} / n_i^{n_i} - 1.
double multimode_fock_robustness(const std::vector<int>& ns);

// rho = (1+q)/2 |a><a| + (1-q)/2 |-a><-a|, a = d / sqrt(2).
struct MixtureSpec {
  double q = 0.0;
  double d = 0.0;

  /// Throws InvalidArgument unless |q| <= 1 and d >= 0.
  void validate() const;
  bool is_gaussian() const { return d == 0.0 || std::abs(q) == 1.0; }
};

/// Fock-basis matrix; throws CutoffTooSmall when more than max_tail is lost.
DensityState mixture_state(const MixtureSpec& s, int cutoff, double max_tail = kDefaultTailGuard);

/// Matrix in the orthonormal basis (|a> +- |-a>) / sqrt(2 (1 +- e^{-d^2})).
Eigen::Matrix2d mixture_qubit(const MixtureSpec& s);

double mixture_wigner(const MixtureSpec& s, double x, double y);

/// Position distribution: integral of the Wigner function over y.
double mixture_marginal(const MixtureSpec& s, double x);

/// Moments of the reference Gaussian: mu = (d q, 0), V = diag(2 d^2 (1 - q^2) + 1, 1).
MomentForm mixture_reference(const MixtureSpec& s);

struct MixtureSpectrum {
  double nu;            // mean photon number of the symplectic diagonal form of the reference
  double lambda_plus;   // nonzero eigenvalues of rho
  double lambda_minus;
  double reference_entropy;
  double state_entropy;
};

MixtureSpectrum mixture_spectrum(const MixtureSpec& s);

/// exp(S(reference) - S(rho)) - 1.
double relent_bound(const MixtureSpec& s);

struct HomodyneEnvelope {
  double value = 0.0;  // clipped at 0
  double x_opt = 0.0;
};

/// sup over x in [0, d+6] of e^{1/2 - (d+x)^2} (e^{4 d x} + 1) x / sqrt(2), minus 1.
/// This is the balanced (q = 0) position-envelope bound with a = 2 x^2.
HomodyneEnvelope homodyne_bound(double d);

/// log of the envelope function above; -inf at x = 0.
double homodyne_log_envelope(double d, double x);

/// Position-envelope bound for any q through the numeric inner minimization,
/// with the Gaussian mean pinned at d q and the grid on [-d-8, d+8].
HomodyneBound mixture_homodyne_bound(const MixtureSpec& s, double step = 0.01);

/// 2 x_opt^2 + 1e-6 >= 2 d^2 + 1 + tanh^8(sqrt(d)).
bool xopt_inequality_check(double d);

struct Fig3Row {
  int n = 0;
  double closed_form = 0.0;
  double optimizer_value = 0.0;  // NaN when the optimizer is skipped
  double rel_err = 0.0;
};

struct Fig3Config {
  bool optimize = true;
  int cutoff = 0;  // 0: max(60, 8 n + 40)
  OptimizerConfig optimizer;
};

std::vector<Fig3Row> fig3_data(const std::vector<int>& ns, const Fig3Config& cfg = {});

struct Fig4Row {
  double d = 0.0;
  double relent_bound = 0.0;
  double homodyne_bound = 0.0;
  double x_opt = 0.0;
};

/// Rows for q on the given d-grid; the q = 0 rows use the closed-form
/// envelope, other q the numeric position bound.
std::vector<Fig4Row> fig4_data(double q, const std::vector<double>& ds, int threads = 0);

/// Least-squares slope of ys against xs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace cvrl
