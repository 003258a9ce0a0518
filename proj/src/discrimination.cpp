#include "cvrl/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "cvrl/robustness.hpp"

namespace cvrl {

namespace {

constexpr double kSpectrumSlack = 1e-10;

// FNV-1a over the bytes of the stored matrix.
std::string hash_matrix(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(Complex);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return fmt::format("fnv1a64:{:016x}", h);
}

double helstrom(const DiscriminationTask& t, double expectation) {
  return 0.5 * (1.0 + std::abs(expectation) / t.x_norm);
}

DensityState target_state(const DiscriminationTask& t) {
  const int n = static_cast<int>(t.target.rows());
  return DensityState::trusted(FockOperator(n, 1, t.target, true), 0.0);
}

}  // namespace

DiscriminationTask task_from_witness(const WitnessReport& w) {
  if (!(w.op_norm > 0.0)) throw InvalidArgument("witness has zero operator norm");
  const Eigen::Index side = w.W.side();
  Matrix x = Matrix::Identity(side, side) - w.W.matrix() / w.op_norm;

  DiscriminationTask t{FockOperator(w.W.cutoff(), w.copies, std::move(x), true),
                       w.target,
                       w.copies,
                       w.epsilon,
                       w.op_norm,
                       1.0 - w.min_eigenvalue / w.op_norm,
                       {0.5, 0.5},
                       hash_matrix(w.W.matrix()),
                       fmt::format("{}-copy witness task, epsilon={:.6g}, |W|={:.6g}", w.copies,
                                   w.epsilon, w.op_norm)};
  const RealVector ev = hermitian_eigenvalues(t.X.matrix());
  if (ev.minCoeff() < -kSpectrumSlack || ev.maxCoeff() > t.x_norm + kSpectrumSlack) {
    throw InvalidArgument(fmt::format("X spectrum [{:.3e}, {:.3e}] outside [0, {:.6g}]",
                                      ev.minCoeff(), ev.maxCoeff(), t.x_norm));
  }
  return t;
}

double task_expectation(const DiscriminationTask& t, const DensityState& eta) {
  if (eta.modes() != 1 || eta.cutoff() != t.X.cutoff()) {
    throw InvalidDimension("probe does not match the task cutoff");
  }
  return trace_with_power(t.X.matrix(), eta.matrix(), t.copies).real();
}

double task_expectation(const DiscriminationTask& t, const GaussianParams& sigma) {
  if (t.copies != 2) throw InvalidArgument("full-space Gaussian evaluation needs two copies");
  return 1.0 - two_copy_value_on_gaussian(target_state(t), t.epsilon, sigma) / t.w_norm;
}

ChannelOutputs channel_outputs(const DiscriminationTask& t, const DensityState& eta) {
  const double bias = 0.5 * task_expectation(t, eta) / t.x_norm;
  return {{{0.5 + bias, 0.5 - bias}, {0.5 - bias, 0.5 + bias}}};
}

double p_succ_binary(const DiscriminationTask& t, const DensityState& eta) {
  return helstrom(t, task_expectation(t, eta));
}

double p_succ_binary(const DiscriminationTask& t, const GaussianParams& sigma) {
  return helstrom(t, task_expectation(t, sigma));
}

double p_succ_with_povm(const ChannelOutputs& out, const std::array<double, 2>& prior,
                        const std::array<double, 2>& m0) {
  double guess0 = 0.0, guess1 = 0.0;
  for (int k = 0; k < 2; ++k) {
    guess0 += m0[k] * out[0][k];
    guess1 += (1.0 - m0[k]) * out[1][k];
  }
  return prior[0] * guess0 + prior[1] * guess1;
}

double analytic_cap(const DiscriminationTask& t) { return 0.5 * (1.0 + 1.0 / t.x_norm); }

GaussianSup gaussian_sup_p_succ(const DiscriminationTask& t, const OptimizerConfig& cfg) {
  GaussianObjective f;
  if (t.copies == 2) {
    f = [&](const GaussianParams& p) { return -p_succ_binary(t, p); };
  } else {
    f = [&](const GaussianParams& p) {
      const SynthesizedMatrix s = synthesize_matrix(p, t.X.cutoff());
      if (s.tail_mass > cfg.max_sigma_tail) return kInfinity;
      return -p_succ_binary(t, DensityState::trusted(FockOperator(t.X.cutoff(), 1, s.rho, true),
                                                     s.tail_mass));
    };
  }
  const MultistartResult found = minimize_gaussian(f, reference_gaussian(target_state(t)), cfg);
  GaussianSup out;
  out.value = std::isfinite(found.value) ? -found.value : 0.0;
  out.argmax = found.argmin;
  out.cap = analytic_cap(t);
  out.status = found.status;
  return out;
}

double advantage_ratio(const DiscriminationTask& t, const DensityState& rho) {
  return p_succ_binary(t, rho) / analytic_cap(t);
}

double advantage_ceiling(double robustness, int copies) {
  return 1.0 + multi_copy_robustness(robustness, copies);
}

SingleCopyAdvantage worst_case_single_copy(const DensityState& rho, const GaussianParams& sigma,
                                           double max_tail) {
  const DensityState s = synthesize(sigma, rho.cutoff(), max_tail);
  FockOperator x = optimal_observable(rho, s);
  const double on_rho = (rho.matrix() * x.matrix()).trace().real();
  const double on_sigma = (s.matrix() * x.matrix()).trace().real();
  return {on_rho / on_sigma, std::move(x), on_rho, on_sigma};
}

WorstCaseInfimum worst_case_infimum(const DensityState& rho, int grid_per_axis,
                                    const OptimizerConfig& cfg) {
  if (grid_per_axis < 1) throw InvalidArgument("grid needs at least one point per axis");
  const GaussianParams ref = reference_gaussian(rho);
  const int g = grid_per_axis;
  const double nbar_lo = 0.05;
  const double nbar_hi = std::max(nbar_lo, cfg.box.nbar_max);
  const auto nbar_at = [&](int i) {
    return g == 1 ? nbar_lo : nbar_lo * std::pow(nbar_hi / nbar_lo, double(i) / (g - 1));
  };
  const auto axis = [g](int i, double hi) { return g == 1 ? 0.0 : hi * i / (g - 1); };

  const int total = g * g * g;
  std::vector<double> values(static_cast<std::size_t>(total), kInfinity);
  std::vector<GaussianParams> points(static_cast<std::size_t>(total));
  parallel_for(total, cfg.threads, [&](int idx) {
    const GaussianParams p{nbar_at(idx / (g * g)), axis((idx / g) % g, cfg.box.r_max),
                           2.0 * std::numbers::pi * (idx % g) / g, ref.alpha};
    points[static_cast<std::size_t>(idx)] = p;
    const SynthesizedMatrix s = synthesize_matrix(p, rho.cutoff());
    if (s.tail_mass > cfg.max_sigma_tail) return;
    values[static_cast<std::size_t>(idx)] = std::exp(dmax(rho.matrix(), s.rho));
  });

  WorstCaseInfimum out;
  out.grid_points = total;
  for (int i = 0; i < total; ++i) {
    if (values[static_cast<std::size_t>(i)] < out.grid_value) {
      out.grid_value = values[static_cast<std::size_t>(i)];
      out.grid_argmin = points[static_cast<std::size_t>(i)];
    }
  }
  OptimizerConfig refine = cfg;
  if (std::isfinite(out.grid_value)) refine.extra_seeds.push_back(out.grid_argmin);
  const RobustnessResult r = robustness_gaussian(rho, refine);
  out.value = std::min(out.grid_value, 1.0 + r.value);
  out.argmin = out.value == out.grid_value ? out.grid_argmin : r.argmin;
  return out;
}

}  // namespace cvrl
