#include "cvrl/case_studies.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

namespace cvrl {

namespace {

constexpr int kBrentBits = 50;
constexpr double kEnvelopeStep = 0.01;
constexpr double kEnvelopeReach = 6.0;

// -p log p with 0 log 0 = 0.
double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

Vector coherent_vector(double amplitude, int cutoff) {
  Vector psi(cutoff);
  psi(0) = std::exp(-0.5 * amplitude * amplitude);
  for (int n = 1; n < cutoff; ++n) psi(n) = psi(n - 1) * amplitude / std::sqrt(double(n));
  return psi;
}

}  // namespace

double fock_robustness(int n) {
  if (n < 0) throw InvalidArgument("photon number must be >= 0");
  if (n == 0) return 0.0;
  const double k = n;
  return std::expm1((k + 1.0) * std::log(k + 1.0) - k * std::log(k));
}

double multimode_fock_robustness(const std::vector<int>& ns) {
  double log_total = 0.0;
  for (int n : ns) log_total += std::log1p(fock_robustness(n));
  return std::expm1(log_total);
}

void MixtureSpec::validate() const {
  if (!(std::abs(q) <= 1.0)) throw InvalidArgument(fmt::format("|q| must be <= 1 (got {})", q));
  if (!(d >= 0.0)) throw InvalidArgument(fmt::format("d must be >= 0 (got {})", d));
}

DensityState mixture_state(const MixtureSpec& s, int cutoff, double max_tail) {
  s.validate();
  if (cutoff < 1) throw InvalidDimension("cutoff must be >= 1");
  const double a = s.d / std::numbers::sqrt2;
  const Vector plus = coherent_vector(a, cutoff);
  const Vector minus = coherent_vector(-a, cutoff);
  Matrix rho = 0.5 * (1.0 + s.q) * plus * plus.adjoint() + 0.5 * (1.0 - s.q) * minus * minus.adjoint();
  const double tail = std::max(0.0, 1.0 - rho.trace().real());
  if (tail > max_tail) {
    throw CutoffTooSmall(fmt::format("mixture q={} d={} loses {:.3e} at cutoff {}", s.q, s.d,
                                     tail, cutoff));
  }
  return DensityState::trusted(FockOperator(cutoff, 1, std::move(rho), true), tail);
}

Eigen::Matrix2d mixture_qubit(const MixtureSpec& s) {
  s.validate();
  const double overlap = std::exp(-s.d * s.d);
  const double off = 0.5 * s.q * std::sqrt(-std::expm1(-2.0 * s.d * s.d));
  Eigen::Matrix2d m;
  m << 0.5 * (1.0 + overlap), off, off, 0.5 * (1.0 - overlap);
  return m;
}

double mixture_wigner(const MixtureSpec& s, double x, double y) {
  const double right = std::exp(-(x - s.d) * (x - s.d) - y * y);
  const double left = std::exp(-(x + s.d) * (x + s.d) - y * y);
  return ((1.0 + s.q) * right + (1.0 - s.q) * left) / (2.0 * std::numbers::pi);
}

double mixture_marginal(const MixtureSpec& s, double x) {
  const double right = std::exp(-(x - s.d) * (x - s.d));
  const double left = std::exp(-(x + s.d) * (x + s.d));
  return ((1.0 + s.q) * right + (1.0 - s.q) * left) / (2.0 * std::sqrt(std::numbers::pi));
}

MomentForm mixture_reference(const MixtureSpec& s) {
  s.validate();
  MomentForm m;
  m.mu = Eigen::Vector2d(s.d * s.q, 0.0);
  m.V = Eigen::Matrix2d::Identity();
  m.V(0, 0) = 2.0 * s.d * s.d * (1.0 - s.q * s.q) + 1.0;
  return m;
}

MixtureSpectrum mixture_spectrum(const MixtureSpec& s) {
  s.validate();
  const double spread = 2.0 * s.d * s.d * (1.0 - s.q * s.q);
  const double nu = 0.5 * (std::sqrt(1.0 + spread) - 1.0);
  const double e2 = std::exp(-2.0 * s.d * s.d);
  const double root = std::sqrt(s.q * s.q + e2 * (1.0 - s.q * s.q));
  MixtureSpectrum out;
  out.nu = nu;
  out.lambda_plus = 0.5 * (1.0 + root);
  // 1 - root loses every digit as d -> 0; use (1 - root^2) / (1 + root).
  out.lambda_minus = 0.5 * (1.0 - s.q * s.q) * (-std::expm1(-2.0 * s.d * s.d)) / (1.0 + root);
  out.reference_entropy = nu > 0.0 ? (1.0 + nu) * std::log1p(nu) - nu * std::log(nu) : 0.0;
  out.state_entropy = entropy_term(out.lambda_plus) + entropy_term(out.lambda_minus);
  return out;
}

double relent_bound(const MixtureSpec& s) {
  const MixtureSpectrum sp = mixture_spectrum(s);
  return std::max(0.0, std::expm1(sp.reference_entropy - sp.state_entropy));
}

double homodyne_log_envelope(double d, double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  // log(e^{4dx} + 1) = 4dx + log1p(e^{-4dx}) for dx >= 0.
  const double t = 4.0 * d * x;
  const double softplus = t + std::log1p(std::exp(-t));
  return 0.5 - (d + x) * (d + x) + softplus + std::log(x) - 0.5 * std::log(2.0);
}

HomodyneEnvelope homodyne_bound(double d) {
  if (!(d >= 0.0)) throw InvalidArgument("d must be >= 0");
  // Balanced vacuum-like limit: the envelope peaks at x = 1/sqrt(2) with value 1.
  if (d == 0.0) return {0.0, 1.0 / std::numbers::sqrt2};
  const double hi = d + kEnvelopeReach;
  const int steps = static_cast<int>(std::ceil(hi / kEnvelopeStep));
  double best_x = kEnvelopeStep, best = homodyne_log_envelope(d, best_x);
  for (int i = 2; i <= steps; ++i) {
    const double x = std::min(hi, i * kEnvelopeStep);
    const double v = homodyne_log_envelope(d, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double lo = std::max(1e-12, best_x - kEnvelopeStep);
  const auto [x_ref, neg] = boost::math::tools::brent_find_minima(
      [d](double x) { return -homodyne_log_envelope(d, x); }, lo,
      std::min(hi, best_x + kEnvelopeStep), kBrentBits);
  if (-neg > best) {
    best = -neg;
    best_x = x_ref;
  }
  return {std::max(0.0, std::expm1(best)), best_x};
}

HomodyneBound mixture_homodyne_bound(const MixtureSpec& s, double step) {
  s.validate();
  HomodyneConfig cfg;
  cfg.mean = s.d * s.q;
  cfg.x_min = -s.d - 8.0;
  cfg.x_max = s.d + 8.0;
  cfg.step = step;
  return lower_bound_homodyne([&s](double x) { return mixture_marginal(s, x); }, cfg);
}

bool xopt_inequality_check(double d) {
  const double x = homodyne_bound(d).x_opt;
  const double rhs = 2.0 * d * d + 1.0 + std::pow(std::tanh(std::sqrt(d)), 8);
  return 2.0 * x * x + 1e-6 >= rhs;
}

std::vector<Fig3Row> fig3_data(const std::vector<int>& ns, const Fig3Config& cfg) {
  std::vector<Fig3Row> rows;
  rows.reserve(ns.size());
  for (int n : ns) {
    Fig3Row row;
    row.n = n;
    row.closed_form = fock_robustness(n);
    row.optimizer_value = std::numeric_limits<double>::quiet_NaN();
    row.rel_err = std::numeric_limits<double>::quiet_NaN();
    if (cfg.optimize) {
      const int cutoff = cfg.cutoff > 0 ? cfg.cutoff : std::max(60, 8 * n + 40);
      row.optimizer_value = robustness_gaussian(DensityState::fock(n, cutoff), cfg.optimizer).value;
      row.rel_err = row.closed_form > 0.0
                        ? std::abs(row.optimizer_value - row.closed_form) / row.closed_form
                        : std::abs(row.optimizer_value);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<Fig4Row> fig4_data(double q, const std::vector<double>& ds, int threads) {
  std::vector<Fig4Row> rows(ds.size());
  parallel_for(static_cast<int>(ds.size()), threads, [&](int i) {
    const MixtureSpec s{q, ds[static_cast<std::size_t>(i)]};
    Fig4Row& row = rows[static_cast<std::size_t>(i)];
    row.d = s.d;
    row.relent_bound = relent_bound(s);
    if (q == 0.0) {
      const HomodyneEnvelope h = homodyne_bound(s.d);
      row.homodyne_bound = h.value;
      row.x_opt = h.x_opt;
    } else {
      const HomodyneBound h = mixture_homodyne_bound(s);
      row.homodyne_bound = h.value;
      row.x_opt = h.x_opt;
    }
  });
  return rows;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidArgument("slope needs two or more paired points");
  }
  const double k = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope needs distinct abscissae");
  return sxy / sxx;
}

}  // namespace cvrl
