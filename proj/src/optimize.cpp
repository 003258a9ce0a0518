#include "cvrl/optimize.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

namespace cvrl {

namespace {

constexpr int kDim = 5;
using Point = std::array<double, kDim>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point to_point(const GaussianParams& p) {
  return {p.nbar, p.r, p.phi, p.alpha.real(), p.alpha.imag()};
}

GaussianParams to_params(const Point& x) { return {x[0], x[1], x[2], {x[3], x[4]}}; }

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

Point clamp_point(Point x, const ParameterBox& box) {
  x[0] = std::clamp(x[0], 0.0, box.nbar_max);
  x[1] = std::clamp(x[1], 0.0, box.r_max);
  x[2] = wrap_phase(x[2]);
  x[3] = std::clamp(x[3], -box.alpha_max, box.alpha_max);
  x[4] = std::clamp(x[4], -box.alpha_max, box.alpha_max);
  return x;
}

// Distance with phi measured on the circle.
double coordinate_gap(const Point& a, const Point& b) {
  double gap = 0.0;
  for (int k = 0; k < kDim; ++k) {
    double d = std::abs(a[k] - b[k]);
    if (k == 2) d = std::min(d, kTwoPi - d);
    gap = std::max(gap, d);
  }
  return gap;
}

}  // namespace

std::string to_string(OptimizerStatus s) {
  return s == OptimizerStatus::kConverged ? "converged" : "budget-exhausted";
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("CVRL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int workers = std::min(n, threads > 0 ? threads : worker_count());
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

GaussianParams clamp_to_box(const GaussianParams& p, const ParameterBox& box) {
  return to_params(clamp_point(to_point(p), box));
}

std::vector<GaussianParams> start_points(const GaussianParams& reference,
                                         const OptimizerConfig& cfg) {
  std::vector<GaussianParams> out;
  out.push_back(clamp_to_box(reference, cfg.box));
  out.push_back(GaussianParams::vacuum());
  for (const auto& s : cfg.extra_seeds) out.push_back(clamp_to_box(s, cfg.box));
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  while (static_cast<int>(out.size()) < cfg.starts) {
    GaussianParams p = reference;
    p.nbar = p.nbar * std::exp(0.5 * gauss(rng)) + 0.3 * std::abs(gauss(rng));
    p.r = std::abs(p.r + 0.2 * gauss(rng));
    p.phi = phase(rng);
    const double ax = 0.5 * gauss(rng);
    const double ay = 0.5 * gauss(rng);
    p.alpha += Complex(ax, ay);
    out.push_back(clamp_to_box(p, cfg.box));
  }
  return out;
}

StartRecord nelder_mead(const GaussianObjective& f, const GaussianParams& start,
                        const OptimizerConfig& cfg) {
  StartRecord rec;
  rec.start = clamp_to_box(start, cfg.box);

  auto eval = [&](const Point& x) {
    ++rec.evals;
    const double v = f(to_params(x));
    return std::isnan(v) ? kInfinity : v;
  };

  std::array<Point, kDim + 1> simplex;
  std::array<double, kDim + 1> values;
  simplex[0] = to_point(rec.start);
  const Point steps = {std::max(0.25, 0.2 * simplex[0][0]), 0.15, 0.6, 0.3, 0.3};
  for (int k = 0; k < kDim; ++k) {
    Point v = simplex[0];
    v[k] += steps[k];
    // Step inward when the start sits on the upper box face.
    Point clamped = clamp_point(v, cfg.box);
    if (coordinate_gap(clamped, simplex[0]) < 1e-12) {
      v[k] -= 2.0 * steps[k];
      clamped = clamp_point(v, cfg.box);
    }
    simplex[k + 1] = clamped;
  }
  for (int i = 0; i <= kDim; ++i) values[i] = eval(simplex[i]);

  std::array<int, kDim + 1> order;
  while (true) {
    for (int i = 0; i <= kDim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    const int best = order[0], worst = order[kDim], second = order[kDim - 1];
    if (!std::isfinite(values[best])) break;

    double x_spread = 0.0;
    for (int i = 1; i <= kDim; ++i) {
      x_spread = std::max(x_spread, coordinate_gap(simplex[order[i]], simplex[best]));
    }
    const double f_spread = values[worst] - values[best];
    if (f_spread <= cfg.ftol * std::max(1.0, std::abs(values[best])) || x_spread <= cfg.xtol) {
      rec.converged = true;
      break;
    }
    if (rec.evals >= cfg.max_evals) break;

    // phi is unwrapped relative to the best vertex so the centroid is local.
    auto unwrap = [&](Point x) {
      const double ref = simplex[best][2];
      x[2] = ref + std::remainder(x[2] - ref, kTwoPi);
      return x;
    };
    Point centroid{};
    for (int i = 0; i < kDim; ++i) {
      const Point x = unwrap(simplex[order[i]]);
      for (int k = 0; k < kDim; ++k) centroid[k] += x[k] / kDim;
    }
    const Point xw = unwrap(simplex[worst]);
    auto along = [&](double t) {
      Point x;
      for (int k = 0; k < kDim; ++k) x[k] = centroid[k] + t * (xw[k] - centroid[k]);
      return clamp_point(x, cfg.box);
    };

    const Point xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const Point xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Point xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    const Point xb = unwrap(simplex[best]);
    for (int i = 1; i <= kDim; ++i) {
      const int j = order[i];
      const Point xj = unwrap(simplex[j]);
      Point x;
      for (int k = 0; k < kDim; ++k) x[k] = xb[k] + 0.5 * (xj[k] - xb[k]);
      simplex[j] = clamp_point(x, cfg.box);
      values[j] = eval(simplex[j]);
    }
  }

  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  rec.best = to_params(simplex[best]);
  rec.value = values[best];
  return rec;
}

MultistartResult minimize_gaussian(const GaussianObjective& f, const GaussianParams& reference,
                                   const OptimizerConfig& cfg) {
  const auto starts = start_points(reference, cfg);
  MultistartResult out;
  out.log.resize(starts.size());
  parallel_for(static_cast<int>(starts.size()), cfg.threads, [&](int i) {
    out.log[i] = nelder_mead(f, starts[i], cfg);
    out.log[i].index = i;
  });
  int winner = -1;
  for (int i = 0; i < static_cast<int>(out.log.size()); ++i) {
    if (winner < 0 || out.log[i].value < out.log[winner].value) winner = i;
  }
  if (winner >= 0) {
    out.value = out.log[winner].value;
    out.argmin = out.log[winner].best;
    out.status = out.log[winner].converged ? OptimizerStatus::kConverged
                                           : OptimizerStatus::kBudgetExhausted;
  }
  return out;
}

}  // namespace cvrl
