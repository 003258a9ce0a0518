#pragma once

// Single-mode Gaussian states.
//
// Conventions: x = (a + a^dagger)/sqrt(2), y = (a - a^dagger)/(i sqrt(2)),
// V_jk = <{r_j - mu_j, r_k - mu_k}> with no 1/2, so the vacuum has V = I and
// Wigner function exp(-x^2 - y^2)/pi. Other references use V_vac = I/2 or
// V_vac = I/4; convert before comparing numbers.
//
// A state with parameters (nbar, r, phi, alpha) is
//   sigma = D(alpha) S(zeta) tau_nbar S(zeta)^dagger D(alpha)^dagger,
//   zeta = r e^{i phi},  S(zeta) = exp((zeta^* a^2 - zeta a^dagger^2)/2),
// with moments mu = sqrt(2) (Re alpha, Im alpha) and
//   V = (2 nbar + 1) R(phi/2) diag(e^{-2r}, e^{2r}) R(phi/2)^T.

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "cvrl/fock.hpp"

namespace cvrl {

struct GaussianParams {
  double nbar = 0.0;
  double r = 0.0;
  double phi = 0.0;
  Complex alpha{0.0, 0.0};

  static GaussianParams vacuum() { return {}; }
  static GaussianParams thermal(double nbar) { return {nbar, 0.0, 0.0, {0.0, 0.0}}; }
  static GaussianParams coherent(Complex alpha) { return {0.0, 0.0, 0.0, alpha}; }
};

struct MomentForm {
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  Eigen::Matrix2d V = Eigen::Matrix2d::Identity();
};

/// Block-diagonal [[0,1],[-1,0]] repeated `modes` times.
Eigen::MatrixXd symplectic_form(int modes);

/// True iff the smallest eigenvalue of V + iΩ is >= -1e-9.
bool bona_fide_check(const Eigen::MatrixXd& V);

MomentForm params_to_moments(const GaussianParams& p);
GaussianParams moments_to_params(const MomentForm& m);

/// Fock-basis matrix elements <m|D(alpha)S(zeta)|n> for m < rows, n < cols.
/// The column recurrence loses accuracy once cols reaches the tens at
/// strong displacement; meant for a few columns (displaced Fock states).
Matrix gaussian_unitary_elements(Complex alpha, double r, double phi, int rows, int cols);

struct SynthesizedMatrix {
  Matrix rho;
  double tail_mass;
};

/// Projected (not renormalized) Gaussian density matrix without validation.
SynthesizedMatrix synthesize_matrix(const GaussianParams& p, int cutoff);

inline constexpr double kDefaultTailGuard = 1e-8;

/// Gaussian density state on |0>..|cutoff-1>. Throws CutoffTooSmall when the
/// truncated tail exceeds `max_tail`.
DensityState synthesize(const GaussianParams& p, int cutoff, double max_tail = kDefaultTailGuard);

/// First and second moments of a single-mode state from normally ordered
/// expectation values (<a>, <a^2>, <a^dagger a>), which are exact for the
/// truncated matrix.
MomentForm moments_of(const DensityState& rho);

/// The Gaussian state sharing rho's first and second moments.
GaussianParams reference_gaussian(const DensityState& rho);

double gaussian_wigner(const MomentForm& m, double x, double y);

/// Marginal ∫ W(x, y) dy of a Gaussian state.
double gaussian_marginal(const MomentForm& m, double x);

/// Von Neumann entropy from the symplectic eigenvalue sqrt(det V).
double gaussian_entropy(const MomentForm& m, LogBase base = LogBase::kNats);

/// Position-quadrature density <x|rho|x> from normalized Hermite functions.
double quadrature_density(const DensityState& rho, double x);

}  // namespace cvrl
