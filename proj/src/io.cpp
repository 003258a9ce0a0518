#include "cvrl/io.hpp"

#include <cmath>

namespace cvrl {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void to_json(Json& j, const GaussianParams& p) {
  j = Json{{"nbar", p.nbar},
           {"r", p.r},
           {"phi", p.phi},
           {"alpha_re", p.alpha.real()},
           {"alpha_im", p.alpha.imag()}};
}

void from_json(const Json& j, GaussianParams& p) {
  p.nbar = j.value("nbar", 0.0);
  p.r = j.value("r", 0.0);
  p.phi = j.value("phi", 0.0);
  p.alpha = Complex(j.value("alpha_re", 0.0), j.value("alpha_im", 0.0));
}

void to_json(Json& j, const MomentForm& m) {
  j = Json{{"mu", {m.mu(0), m.mu(1)}},
           {"V", {{m.V(0, 0), m.V(0, 1)}, {m.V(1, 0), m.V(1, 1)}}}};
}

void from_json(const Json& j, MomentForm& m) {
  const auto& mu = j.at("mu");
  const auto& v = j.at("V");
  m.mu = Eigen::Vector2d(mu.at(0).get<double>(), mu.at(1).get<double>());
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m.V(r, c) = v.at(r).at(c).get<double>();
  }
}

void to_json(Json& j, const ParameterBox& b) {
  j = Json{{"nbar_max", b.nbar_max}, {"r_max", b.r_max}, {"alpha_max", b.alpha_max}};
}

void from_json(const Json& j, ParameterBox& b) {
  b.nbar_max = j.value("nbar_max", b.nbar_max);
  b.r_max = j.value("r_max", b.r_max);
  b.alpha_max = j.value("alpha_max", b.alpha_max);
}

void to_json(Json& j, const OptimizerConfig& c) {
  j = Json{{"starts", c.starts},
           {"max_evals", c.max_evals},
           {"xtol", c.xtol},
           {"ftol", c.ftol},
           {"seed", c.seed},
           {"box", c.box},
           {"extra_seeds", c.extra_seeds},
           {"threads", c.threads},
           {"max_sigma_tail", c.max_sigma_tail}};
}

void from_json(const Json& j, OptimizerConfig& c) {
  c.starts = j.value("starts", c.starts);
  c.max_evals = j.value("max_evals", c.max_evals);
  c.xtol = j.value("xtol", c.xtol);
  c.ftol = j.value("ftol", c.ftol);
  c.seed = j.value("seed", c.seed);
  if (j.contains("box")) c.box = j.at("box").get<ParameterBox>();
  if (j.contains("extra_seeds")) c.extra_seeds = j.at("extra_seeds").get<std::vector<GaussianParams>>();
  c.threads = j.value("threads", c.threads);
  c.max_sigma_tail = j.value("max_sigma_tail", c.max_sigma_tail);
}

void to_json(Json& j, const SoundnessConfig& c) {
  j = Json{{"sobol_points", c.sobol_points},
           {"adversarial_starts", c.adversarial_starts},
           {"tolerance", c.tolerance},
           {"optimizer", c.optimizer}};
}

void to_json(Json& j, const HomodyneConfig& c) {
  j = Json{{"x_min", c.x_min},
           {"x_max", c.x_max},
           {"step", c.step},
           {"mean", c.mean},
           {"variance_min", c.variance_min},
           {"variance_max", c.variance_max}};
}

void to_json(Json& j, const StartRecord& r) {
  j = Json{{"index", r.index},
           {"start", r.start},
           {"best", r.best},
           {"value", number_or_null(r.value)},
           {"evals", r.evals},
           {"converged", r.converged}};
}

void to_json(Json& j, const RobustnessResult& r) {
  j = Json{{"value", number_or_null(r.value)},
           {"dmax", number_or_null(r.dmax)},
           {"argmin", r.argmin},
           {"status", to_string(r.status)},
           {"multistart_log", r.multistart_log}};
}

void to_json(Json& j, const WitnessEvaluation& e) {
  j = Json{{"label", e.label}, {"value", number_or_null(e.value)}};
}

void to_json(Json& j, const WitnessReport& w) {
  j = Json{{"m", w.copies},
           {"epsilon", w.epsilon},
           {"op_norm", w.op_norm},
           {"min_eigenvalue", w.min_eigenvalue},
           {"max_eigenvalue", w.max_eigenvalue},
           {"cutoff", w.W.cutoff()},
           {"evaluations", w.evaluations},
           {"heuristic_flags", w.heuristic_flags}};
}

void to_json(Json& j, const SoundnessReport& r) {
  j = Json{{"min_value", number_or_null(r.min_value)},
           {"argmin", r.argmin},
           {"argmin_source", r.argmin_source},
           {"sobol_points", r.sobol_points},
           {"adversarial_points", r.adversarial_points},
           {"cross_checked", r.cross_checked},
           {"max_route_gap", r.max_route_gap}};
}

void to_json(Json& j, const DiscriminationTask& t) {
  j = Json{{"m", t.copies},
           {"cutoff", t.X.cutoff()},
           {"epsilon", t.epsilon},
           {"w_norm", t.w_norm},
           {"x_norm", t.x_norm},
           {"prior", {t.prior[0], t.prior[1]}},
           {"cap", analytic_cap(t)},
           {"witness_hash", t.witness_hash},
           {"description", t.description}};
}

void to_json(Json& j, const GaussianSup& s) {
  j = Json{{"value", s.value}, {"argmax", s.argmax}, {"cap", s.cap}, {"status", to_string(s.status)}};
}

void to_json(Json& j, const Fig3Row& r) {
  j = Json{{"n", r.n},
           {"closed_form", r.closed_form},
           {"optimizer_value", number_or_null(r.optimizer_value)},
           {"rel_err", number_or_null(r.rel_err)}};
}

void to_json(Json& j, const Fig4Row& r) {
  j = Json{{"d", r.d},
           {"relent_bound", r.relent_bound},
           {"homodyne_bound", r.homodyne_bound},
           {"x_opt", r.x_opt}};
}

}  // namespace cvrl
