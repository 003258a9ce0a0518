#include "cvrl/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/random/sobol.hpp>
#include <fmt/format.h>

namespace cvrl {

namespace {

constexpr double kIndistinguishable = 1e-10;
constexpr double kDefiningValueTolerance = 1e-8;

void require_single_mode(const DensityState& rho) {
  if (rho.modes() != 1) throw InvalidDimension("witnesses are built for single-mode states");
}

void require_positive(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument(fmt::format("epsilon must be > 0 (got {})", epsilon));
}

// W += Y ⊗ I_inner for a square Y of side w.rows() / inner.
void add_kron_identity(Matrix& w, const Matrix& y, Eigen::Index inner, Complex scale) {
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const Complex v = scale * y(i, j);
      if (v == Complex(0.0)) continue;
      for (Eigen::Index k = 0; k < inner; ++k) w(i * inner + k, j * inner + k) += v;
    }
  }
}

// V_m X with V_m given by its row permutation.
Matrix shift_rows(const std::vector<Eigen::Index>& perm, const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void hermitize_in_place(Matrix& w) {
  const Eigen::Index n = w.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    w(j, j) = w(j, j).real();
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Complex v = 0.5 * (w(i, j) + std::conj(w(j, i)));
      w(i, j) = v;
      w(j, i) = std::conj(v);
    }
  }
}

void set_spectrum(WitnessReport& rep, double lo, double hi) {
  rep.min_eigenvalue = lo;
  rep.max_eigenvalue = hi;
  rep.op_norm = std::max(std::abs(lo), std::abs(hi));
}

GaussianParams sobol_point(const std::array<double, 5>& u, const ParameterBox& box) {
  return {u[0] * box.nbar_max,
          u[1] * box.r_max,
          2.0 * std::numbers::pi * u[2],
          {(2.0 * u[3] - 1.0) * box.alpha_max, (2.0 * u[4] - 1.0) * box.alpha_max}};
}

std::string describe(const GaussianParams& p) {
  return fmt::format("nbar={:.6g} r={:.6g} phi={:.6g} alpha=({:.6g}, {:.6g})", p.nbar, p.r, p.phi,
                     p.alpha.real(), p.alpha.imag());
}

}  // namespace

double hs_distance2_to_gaussian(const DensityState& rho, const GaussianParams& sigma) {
  require_single_mode(rho);
  const SynthesizedMatrix block = synthesize_matrix(sigma, rho.cutoff());
  const double overlap = rho.matrix().cwiseProduct(block.rho.conjugate()).sum().real();
  const double sigma_purity = 1.0 / (2.0 * sigma.nbar + 1.0);
  return rho.matrix().squaredNorm() + sigma_purity - 2.0 * overlap;
}

EpsilonEstimate epsilon_search(const DensityState& rho, const OptimizerConfig& cfg) {
  require_single_mode(rho);
  const GaussianObjective f = [&](const GaussianParams& p) {
    return hs_distance2_to_gaussian(rho, p);
  };
  const MultistartResult best = minimize_gaussian(f, reference_gaussian(rho), cfg);
  if (!(best.value > kIndistinguishable)) {
    throw IndistinguishableFromGaussian(fmt::format(
        "Hilbert-Schmidt distance^2 {:.3e} to the Gaussian {} at cutoff {}", best.value,
        describe(best.argmin), rho.cutoff()));
  }
  return {0.5 * best.value, best.value, best.argmin};
}

double epsilon_bound(const DensityState& rho, const OptimizerConfig& cfg) {
  return epsilon_search(rho, cfg).epsilon;
}

EpsilonEstimate quartic_epsilon_search(const DensityState& rho, const OptimizerConfig& cfg) {
  require_single_mode(rho);
  const GaussianObjective f = [&](const GaussianParams& p) {
    const Matrix diff = rho.matrix() - synthesize_matrix(p, rho.cutoff()).rho;
    return (diff * diff).squaredNorm();
  };
  const MultistartResult best = minimize_gaussian(f, reference_gaussian(rho), cfg);
  if (!(best.value > kIndistinguishable)) {
    throw IndistinguishableFromGaussian(fmt::format(
        "tr[(rho - sigma)^4] = {:.3e} at the Gaussian {} at cutoff {}", best.value,
        describe(best.argmin), rho.cutoff()));
  }
  return {0.5 * best.value, best.value, best.argmin};
}

WitnessReport two_copy_witness(const DensityState& rho, double epsilon) {
  require_single_mode(rho);
  require_positive(epsilon);
  const int n = rho.cutoff();
  const double shift = rho.matrix().squaredNorm() - epsilon;
  Matrix w = swap_operator(n).matrix();
  w.diagonal().array() += shift;
  add_kron_identity(w, rho.matrix(), n, -2.0);
  hermitize_in_place(w);

  WitnessReport rep{
      FockOperator(n, 2, std::move(w), true), rho.matrix(), 2, epsilon, 0.0, 0.0, 0.0, {}, {}};
  // Outside P ⊗ P the operator splits into 2x2 blocks [[c - 2l, 1], [1, c]]
  // (l an eigenvalue of rho, 0 included) plus c +- 1 on Q ⊗ Q.
  const RealVector inside = hermitian_eigenvalues(rep.W.matrix());
  double lo = std::min(inside.minCoeff(), shift - 1.0);
  double hi = std::max(inside.maxCoeff(), shift + 1.0);
  for (double l : hermitian_eigenvalues(rho.matrix())) {
    const double root = std::sqrt(l * l + 1.0);
    lo = std::min(lo, shift - l - root);
    hi = std::max(hi, shift - l + root);
  }
  set_spectrum(rep, lo, hi);
  rep.evaluations.push_back({"rho", witness_value(rep, rho)});
  rep.heuristic_flags.push_back("epsilon is half the best Gaussian distance found, not certified");
  return rep;
}

WitnessReport four_copy_witness(const DensityState& rho, double epsilon, std::int64_t max_side) {
  require_single_mode(rho);
  require_positive(epsilon);
  const int n = rho.cutoff();
  const auto perm4 = cyclic_shift_permutation(4, n, max_side);
  const auto perm3 = cyclic_shift_permutation(3, n, max_side);
  const auto perm2 = cyclic_shift_permutation(2, n, max_side);
  const Matrix& r1 = rho.matrix();
  const Matrix r2 = r1 * r1;
  const Matrix r3 = r2 * r1;
  const Matrix id = Matrix::Identity(n, n);
  const Eigen::Index d = n;
  const auto side = static_cast<Eigen::Index>(perm4.size());

  // tr[(rho - eta)^4] = tr rho^4 - 4 tr[rho^3 eta] + 4 tr[rho^2 eta^2]
  //                   + 2 tr[rho eta rho eta] - 4 tr[rho eta^3] + tr eta^4.
  Matrix w = Matrix::Zero(side, side);
  w.diagonal().array() += (r2 * r2).trace().real() - epsilon;
  add_kron_identity(w, r3, d * d * d, -4.0);
  add_kron_identity(w, shift_rows(perm2, kron(r2, id)), d * d, 4.0);
  add_kron_identity(w, shift_rows(perm2, kron(r1, r1)), d * d, 2.0);
  add_kron_identity(w, shift_rows(perm3, kron(kron(r1, id), id)), d, -4.0);
  for (Eigen::Index i = 0; i < side; ++i) w(i, perm4[static_cast<std::size_t>(i)]) += 1.0;
  hermitize_in_place(w);

  WitnessReport rep{
      FockOperator(n, 4, std::move(w), true), rho.matrix(), 4, epsilon, 0.0, 0.0, 0.0, {}, {}};
  const RealVector spectrum = hermitian_eigenvalues(rep.W.matrix());
  set_spectrum(rep, spectrum.minCoeff(), spectrum.maxCoeff());
  rep.evaluations.push_back({"rho", witness_value(rep, rho)});
  rep.heuristic_flags.push_back("epsilon is supplied by the caller");
  rep.heuristic_flags.push_back("spectrum of the truncated four-copy matrix");
  return rep;
}

double witness_value(const WitnessReport& w, const DensityState& eta) {
  if (eta.modes() != 1 || eta.cutoff() != w.W.cutoff()) {
    throw InvalidDimension("probe does not match the witness cutoff");
  }
  return trace_with_power(w.W.matrix(), eta.matrix(), w.copies).real();
}

double record_probe(WitnessReport& w, const std::string& label, const DensityState& eta) {
  const double v = witness_value(w, eta);
  w.evaluations.push_back({label, v});
  return v;
}

double robustness_lower_from_witness(const DensityState& rho, const WitnessReport& w) {
  if (!(w.op_norm > 0.0)) throw InvalidArgument("witness has zero operator norm");
  const double ratio = std::max(0.0, -witness_value(w, rho) / w.op_norm);
  return std::pow(ratio, 1.0 / w.copies);
}

double two_copy_value_on_gaussian(const DensityState& rho, double epsilon,
                                  const GaussianParams& sigma) {
  return hs_distance2_to_gaussian(rho, sigma) - epsilon;
}

SoundnessReport check_two_copy_soundness(const DensityState& rho, const WitnessReport& w,
                                         const SoundnessConfig& cfg) {
  if (w.copies != 2) throw InvalidArgument("soundness check is for two-copy witnesses");
  if (std::abs(witness_value(w, rho) + w.epsilon) > kDefiningValueTolerance) {
    throw InvalidArgument("witness was not built for this state");
  }
  SoundnessReport rep;
  const auto consider = [&](const GaussianParams& p, double v, const std::string& source) {
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = p;
      rep.argmin_source = source;
    }
  };
  // With eta = P sigma P and t = tr eta, the full-space value exceeds the
  // stored-matrix value by (tr sigma^2 - tr eta^2) + (1 - t^2)(tr rho^2 - eps)
  // - 2 (1 - t) tr[rho eta].
  const double rho_purity = rho.matrix().squaredNorm();
  const auto cross_check = [&](const GaussianParams& p, double full) {
    const SynthesizedMatrix block = synthesize_matrix(p, rho.cutoff());
    const double t = block.rho.trace().real();
    const auto probe = DensityState::trusted(
        FockOperator(rho.cutoff(), 1, block.rho, true), block.tail_mass);
    const double overlap = rho.matrix().cwiseProduct(block.rho.conjugate()).sum().real();
    const double correction = (1.0 / (2.0 * p.nbar + 1.0) - block.rho.squaredNorm()) +
                              (1.0 - t * t) * (rho_purity - w.epsilon) - 2.0 * (1.0 - t) * overlap;
    rep.max_route_gap =
        std::max(rep.max_route_gap, std::abs(witness_value(w, probe) + correction - full));
    ++rep.cross_checked;
  };

  std::mt19937_64 rng(cfg.optimizer.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, 5> offset;
  for (double& o : offset) o = unit(rng);
  boost::random::sobol sobol(5);
  const double span = static_cast<double>(sobol.max() - sobol.min()) + 1.0;
  for (int i = 0; i < cfg.sobol_points; ++i) {
    std::array<double, 5> u;
    for (int k = 0; k < 5; ++k) {
      u[k] = std::fmod(static_cast<double>(sobol() - sobol.min()) / span + offset[k], 1.0);
    }
    const GaussianParams p = sobol_point(u, cfg.optimizer.box);
    const double v = two_copy_value_on_gaussian(rho, w.epsilon, p);
    consider(p, v, fmt::format("sobol {}", i));
    cross_check(p, v);
    ++rep.sobol_points;
  }

  OptimizerConfig adv = cfg.optimizer;
  adv.starts = cfg.adversarial_starts;
  const GaussianObjective f = [&](const GaussianParams& p) {
    return two_copy_value_on_gaussian(rho, w.epsilon, p);
  };
  const MultistartResult found = minimize_gaussian(f, reference_gaussian(rho), adv);
  for (const auto& rec : found.log) {
    consider(rec.best, rec.value, fmt::format("adversarial start {}", rec.index));
    cross_check(rec.best, rec.value);
    ++rep.adversarial_points;
  }

  if (rep.min_value < -cfg.tolerance) {
    throw WitnessViolation(fmt::format("tr[W sigma^2] = {:.3e} < 0 at sigma: {} ({})",
                                       rep.min_value, describe(rep.argmin), rep.argmin_source));
  }
  return rep;
}

}  // namespace cvrl
