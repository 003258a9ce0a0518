#include "cvrl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cvrl/discrimination.hpp"
#include "cvrl/io.hpp"
#include "cvrl/robustness.hpp"
#include "cvrl/witness.hpp"

namespace cvrl::cli {

namespace {

constexpr double kStateTail = 1e-10;
constexpr double kRatioMargin = 1e-9;
constexpr double kCeilingSlack = 1e-6;
constexpr double kCapSlack = 1e-8;
constexpr double kBoundSlack = 1e-9;
constexpr int kMaxFourCopyCutoff = 8;

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidArgument(fmt::format("cannot read {} from '{}'", what, text));
  }
  return v;
}

// Smallest cutoff at which the state keeps all but `tail` of its weight.
int cutoff_for_tail(const StateSpec& s, double tail) {
  for (int n = 2; n <= 400; ++n) {
    double lost = 0.0;
    switch (s.kind) {
      case StateSpec::Kind::kFock:
        lost = s.n < n ? 0.0 : 1.0;
        break;
      case StateSpec::Kind::kMixture:
        lost = mixture_state(s.mixture, n, 1.0).tail_mass();
        break;
      case StateSpec::Kind::kGaussian:
        lost = synthesize_matrix(s.gaussian, n).tail_mass;
        break;
    }
    if (lost <= tail) return n;
  }
  throw InvalidArgument(fmt::format("state '{}' needs a cutoff above 400", s.label));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_number(double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : ""; }

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + "\n";
}

OptimizerConfig optimizer_config(const RunConfig& rc) {
  OptimizerConfig c;
  c.starts = rc.starts;
  c.max_evals = rc.max_evals;
  c.seed = rc.seed;
  return c;
}

SoundnessConfig soundness_config(const RunConfig& rc) {
  SoundnessConfig c;
  c.sobol_points = rc.sobol;
  c.adversarial_starts = rc.adversarial;
  c.optimizer = optimizer_config(rc);
  return c;
}

Json run_config_json(const RunConfig& rc) {
  return Json{{"cutoff", rc.cutoff},     {"cutoff2", rc.cutoff2}, {"cutoff4", rc.cutoff4},
              {"seed", rc.seed},         {"starts", rc.starts},   {"max_evals", rc.max_evals},
              {"tol", rc.tol},           {"sobol", rc.sobol},     {"adversarial", rc.adversarial},
              {"format", rc.format},     {"bits", rc.bits}};
}

// Body plus verdict of one subcommand.
struct Outcome {
  int code = kPass;
  std::string body;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    failures.push_back(what);
    code = kCertificateFailure;
  }
};

std::string finish_json(Json j, const Outcome& o) {
  j["pass"] = o.code == kPass;
  j["failures"] = o.failures;
  return j.dump(2) + "\n";
}

Outcome cmd_fock(const RunConfig& rc, const std::string& range, bool optimize) {
  Fig3Config cfg;
  cfg.optimize = optimize;
  cfg.cutoff = rc.cutoff;
  cfg.optimizer = optimizer_config(rc);
  const auto rows = fig3_data(parse_n_range(range), cfg);
  Outcome o;
  for (const auto& r : rows) {
    if (optimize) {
      o.check(r.rel_err <= rc.tol, fmt::format("n={}: relative error {:.3e} above {}", r.n,
                                                r.rel_err, rc.tol));
    }
  }
  if (rc.format == "json") {
    o.body = finish_json(Json{{"command", "fock"}, {"config", run_config_json(rc)}, {"rows", rows}}, o);
  } else {
    o.body = "n,closed_form,optimizer_value,rel_err\n";
    for (const auto& r : rows) {
      o.body += csv_row({std::to_string(r.n), csv_number(r.closed_form),
                         csv_number(r.optimizer_value), csv_number(r.rel_err)});
    }
  }
  return o;
}

Outcome cmd_mixture(const RunConfig& rc, double q, const std::string& grid, bool optimize) {
  MixtureSpec{q, 0.0}.validate();
  const auto ds = parse_grid(grid);
  const auto rows = fig4_data(q, ds);
  std::vector<double> opt(rows.size(), std::numeric_limits<double>::quiet_NaN());
  Outcome o;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (q == 0.0) {
      if (r.d >= 0.6 - 1e-12) {
        o.check(r.homodyne_bound >= r.relent_bound - kBoundSlack,
                fmt::format("d={}: position bound below the entropy bound", r.d));
      }
      o.check(xopt_inequality_check(r.d), fmt::format("d={}: optimal variance below 1", r.d));
    }
    if (optimize) {
      StateSpec s;
      s.kind = StateSpec::Kind::kMixture;
      s.mixture = {q, r.d};
      const int cutoff = rc.cutoff > 0 ? rc.cutoff : default_cutoff(s);
      opt[i] = robustness_gaussian(build_state(s, cutoff), optimizer_config(rc)).value;
      const double lower = std::max(r.relent_bound, r.homodyne_bound);
      o.check(lower <= opt[i] * (1.0 + rc.tol) + 1e-6,
              fmt::format("d={}: lower bound {:.6g} above optimizer value {:.6g}", r.d, lower,
                          opt[i]));
    }
  }
  if (rc.format == "json") {
    Json out_rows = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Json row = rows[i];
      if (optimize) row["optimizer_value"] = number_or_null(opt[i]);
      out_rows.push_back(row);
    }
    o.body = finish_json(Json{{"command", "mixture"},
                              {"q", q},
                              {"config", run_config_json(rc)},
                              {"rows", out_rows}},
                         o);
  } else {
    o.body = optimize ? "d,relent_bound,homodyne_bound,x_opt,optimizer_value\n"
                      : "d,relent_bound,homodyne_bound,x_opt\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      std::vector<std::string> f{csv_number(r.d), csv_number(r.relent_bound),
                                 csv_number(r.homodyne_bound), csv_number(r.x_opt)};
      if (optimize) f.push_back(csv_number(opt[i]));
      o.body += csv_row(f);
    }
  }
  return o;
}

// Witness, its soundness sweep and the witness lower bound for one state.
struct WitnessRun {
  DensityState rho;
  EpsilonEstimate eps;
  WitnessReport w;
  std::optional<SoundnessReport> soundness;
  double witness_rho = 0.0;
  double lower = 0.0;
};

WitnessRun build_witness(const RunConfig& rc, const StateSpec& spec, int copies, Outcome& o) {
  const OptimizerConfig opt = optimizer_config(rc);
  if (copies == 2) {
    const int cutoff = rc.cutoff2 > 0 ? rc.cutoff2 : default_witness_cutoff(spec);
    DensityState rho = build_state(spec, cutoff);
    const EpsilonEstimate eps = epsilon_search(rho, opt);
    WitnessReport w = two_copy_witness(rho, eps.epsilon);
    WitnessRun run{rho, eps, w, std::nullopt, 0.0, 0.0};
    try {
      run.soundness = check_two_copy_soundness(rho, w, soundness_config(rc));
    } catch (const WitnessViolation& e) {
      o.check(false, e.what());
    }
    run.witness_rho = witness_value(w, rho);
    run.lower = robustness_lower_from_witness(rho, w);
    return run;
  }
  const int cutoff =
      rc.cutoff4 > 0 ? rc.cutoff4 : std::min(kMaxFourCopyCutoff, default_witness_cutoff(spec));
  DensityState rho = build_state(spec, cutoff);
  const EpsilonEstimate eps = quartic_epsilon_search(rho, opt);
  WitnessReport w = four_copy_witness(rho, eps.epsilon);
  w.heuristic_flags.push_back("no Gaussian soundness sweep for four copies");
  WitnessRun run{rho, eps, w, std::nullopt, 0.0, 0.0};
  run.witness_rho = witness_value(w, rho);
  run.lower = robustness_lower_from_witness(rho, w);
  return run;
}

std::string d_or_n_field(const StateSpec& s) { return csv_number(s.d_or_n()); }

Outcome cmd_witness_demo(const RunConfig& rc, const StateSpec& spec, int copies) {
  Outcome o;
  const WitnessRun run = build_witness(rc, spec, copies, o);
  o.check(run.witness_rho < 0.0, fmt::format("tr[W rho] = {:.3e} is not negative", run.witness_rho));
  if (rc.format == "json") {
    Json j{{"command", "witness-demo"},
           {"state", spec.label},
           {"d_or_n", number_or_null(spec.d_or_n())},
           {"config", run_config_json(rc)},
           {"witness", run.w},
           {"closest_gaussian", run.eps.closest},
           {"witness_lower_bound", run.lower}};
    j["soundness"] = run.soundness ? Json(*run.soundness) : Json(nullptr);
    o.body = finish_json(j, o);
  } else {
    o.body =
        "state_label,d_or_n,copies,cutoff,epsilon,op_norm,witness_rho,witness_lower_bound,"
        "soundness_min,sobol_points,adversarial_points,max_route_gap\n";
    const auto& s = run.soundness;
    o.body += csv_row({csv_field(spec.label), d_or_n_field(spec), std::to_string(copies),
                       std::to_string(run.w.W.cutoff()), csv_number(run.w.epsilon),
                       csv_number(run.w.op_norm), csv_number(run.witness_rho),
                       csv_number(run.lower), s ? csv_number(s->min_value) : "",
                       s ? std::to_string(s->sobol_points) : "",
                       s ? std::to_string(s->adversarial_points) : "",
                       s ? csv_number(s->max_route_gap) : ""});
  }
  return o;
}

// Largest closed-form or entropic lower bound available for the state.
double best_known_lower_bound(const StateSpec& spec, const DensityState& rho) {
  switch (spec.kind) {
    case StateSpec::Kind::kFock:
      return fock_robustness(spec.n);
    case StateSpec::Kind::kMixture: {
      double b = relent_bound(spec.mixture);
      if (spec.mixture.q == 0.0) b = std::max(b, homodyne_bound(spec.mixture.d).value);
      return b;
    }
    case StateSpec::Kind::kGaussian:
      break;
  }
  return std::max(0.0, std::expm1(rel_entropy_nongaussianity(rho)));
}

Outcome cmd_discrim_demo(const RunConfig& rc, const StateSpec& spec) {
  Outcome o;
  const WitnessRun run = build_witness(rc, spec, 2, o);
  const DiscriminationTask task = task_from_witness(run.w);
  const double p_rho = p_succ_binary(task, run.rho);
  const double cap = analytic_cap(task);
  const double ratio = advantage_ratio(task, run.rho);
  const GaussianSup sup = gaussian_sup_p_succ(task, optimizer_config(rc));

  const int cutoff = rc.cutoff > 0 ? rc.cutoff : default_cutoff(spec);
  const DensityState big = build_state(spec, cutoff);
  const RobustnessResult robust = robustness_gaussian(big, optimizer_config(rc));
  const double ceiling = advantage_ceiling(robust.value, task.copies);
  const double known = best_known_lower_bound(spec, big);

  o.check(run.witness_rho < 0.0, "witness is not negative on rho");
  o.check(ratio > 1.0 + kRatioMargin, fmt::format("advantage ratio {:.12g} not above 1", ratio));
  o.check(ratio <= ceiling + kCeilingSlack,
          fmt::format("advantage ratio {:.12g} above (1+R)^2 = {:.12g}", ratio, ceiling));
  o.check(sup.value <= cap + kCapSlack,
          fmt::format("Gaussian success {:.12g} above the cap {:.12g}", sup.value, cap));
  o.check(run.lower <= known + kBoundSlack,
          fmt::format("witness bound {:.6g} above the known bound {:.6g}", run.lower, known));
  o.check(known <= robust.value * (1.0 + rc.tol) + 1e-6,
          fmt::format("known bound {:.6g} above the optimizer value {:.6g}", known, robust.value));

  if (rc.format == "json") {
    Json j{{"command", "discrim-demo"},
           {"state", spec.label},
           {"d_or_n", number_or_null(spec.d_or_n())},
           {"config", run_config_json(rc)},
           {"witness", run.w},
           {"task", task},
           {"p_rho", p_rho},
           {"cap", cap},
           {"ratio", ratio},
           {"gaussian_sup", sup},
           {"robustness", {{"cutoff", cutoff}, {"value", robust.value}, {"argmin", robust.argmin},
                           {"status", to_string(robust.status)}}},
           {"theorem2_cap", ceiling},
           {"witness_lower_bound", run.lower},
           {"known_lower_bound", known}};
    j["soundness"] = run.soundness ? Json(*run.soundness) : Json(nullptr);
    o.body = finish_json(j, o);
  } else {
    o.body = "state_label,d_or_n,epsilon,x_norm,p_rho,cap,ratio,theorem2_cap\n";
    o.body += csv_row({csv_field(spec.label), d_or_n_field(spec), csv_number(task.epsilon),
                       csv_number(task.x_norm), csv_number(p_rho), csv_number(cap),
                       csv_number(ratio), csv_number(ceiling)});
  }
  return o;
}

Outcome cmd_entropy(const RunConfig& rc, const StateSpec& spec) {
  const int cutoff = rc.cutoff > 0 ? rc.cutoff : default_cutoff(spec);
  const DensityState rho = build_state(spec, cutoff);
  const LogBase base = rc.bits ? LogBase::kBits : LogBase::kNats;
  const double s_rho = von_neumann_entropy(rho, base);
  const double s_ref = gaussian_entropy(moments_of(rho), base);
  const double gap_nats = gaussian_entropy(moments_of(rho)) - von_neumann_entropy(rho);
  const double bound = std::max(0.0, std::expm1(gap_nats));
  Outcome o;
  if (spec.kind == StateSpec::Kind::kFock) {
    o.check(std::abs(bound - fock_robustness(spec.n)) <= 1e-6 * (1.0 + bound),
            "entropy bound differs from the Fock closed form");
  } else if (spec.kind == StateSpec::Kind::kMixture) {
    o.check(std::abs(bound - relent_bound(spec.mixture)) <= 1e-6 * (1.0 + bound),
            "entropy bound differs from the mixture closed form");
  }
  const std::string unit = rc.bits ? "bits" : "nats";
  if (rc.format == "json") {
    o.body = finish_json(Json{{"command", "entropy"},
                              {"state", spec.label},
                              {"d_or_n", number_or_null(spec.d_or_n())},
                              {"cutoff", cutoff},
                              {"unit", unit},
                              {"entropy", s_rho},
                              {"reference_entropy", s_ref},
                              {"relent_nongaussianity", s_ref - s_rho},
                              {"relent_bound", bound}},
                         o);
  } else {
    o.body = "state_label,d_or_n,cutoff,unit,entropy,reference_entropy,relent_nongaussianity,"
             "relent_bound\n";
    o.body += csv_row({csv_field(spec.label), d_or_n_field(spec), std::to_string(cutoff), unit,
                       csv_number(s_rho), csv_number(s_ref), csv_number(s_ref - s_rho),
                       csv_number(bound)});
  }
  return o;
}

Outcome cmd_config(const RunConfig& rc) {
  Json j{{"run", run_config_json(rc)},
         {"optimizer", optimizer_config(rc)},
         {"soundness", soundness_config(rc)},
         {"homodyne", HomodyneConfig{}},
         {"tail_guards",
          {{"synthesis", kDefaultTailGuard},
           {"robustness", kRobustnessTailGuard},
           {"state", kStateTail}}},
         {"support_floor", kSupportFloor},
         {"four_copy_max_side", kDefaultMaxSide},
         {"thread_cap_env", "CVRL_THREADS"}};
  Outcome o;
  o.body = j.dump(2) + "\n";
  return o;
}

int emit(const Outcome& o, const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.out.empty()) {
    out << o.body;
  } else {
    std::ofstream file(rc.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << rc.out << "\n";
      return kUsage;
    }
    file << o.body;
  }
  for (const auto& f : o.failures) err << "FAIL: " << f << "\n";
  return o.code;
}

}  // namespace

double StateSpec::d_or_n() const {
  switch (kind) {
    case Kind::kFock:
      return n;
    case Kind::kMixture:
      return mixture.d;
    case Kind::kGaussian:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

StateSpec parse_state(const std::string& text) {
  StateSpec s;
  s.label = text;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument(fmt::format("state '{}' has no kind", text));
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  std::map<std::string, double> keys;
  const auto read_keys = [&](const std::vector<std::string>& allowed) {
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument(fmt::format("'{}' is not key=value", item));
      const std::string key = item.substr(0, eq);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw InvalidArgument(fmt::format("unknown key '{}' in '{}'", key, text));
      }
      keys[key] = parse_number(item.substr(eq + 1), key);
    }
  };

  if (kind == "fock") {
    s.kind = StateSpec::Kind::kFock;
    const double n = parse_number(rest, "photon number");
    if (n < 0 || n != std::floor(n)) throw InvalidArgument("photon number must be a natural number");
    s.n = static_cast<int>(n);
  } else if (kind == "mixture") {
    s.kind = StateSpec::Kind::kMixture;
    read_keys({"q", "d"});
    s.mixture = {keys.count("q") ? keys["q"] : 0.0, keys.count("d") ? keys["d"] : 0.0};
    s.mixture.validate();
  } else if (kind == "gaussian") {
    s.kind = StateSpec::Kind::kGaussian;
    if (rest != "vacuum") {
      read_keys({"nbar", "r", "phi", "re", "im"});
      s.gaussian = {keys["nbar"], keys["r"], keys["phi"], {keys["re"], keys["im"]}};
      if (s.gaussian.nbar < 0.0 || s.gaussian.r < 0.0) {
        throw InvalidArgument("nbar and r must be >= 0");
      }
    }
  } else {
    throw InvalidArgument(fmt::format("unknown state kind '{}'", kind));
  }
  return s;
}

std::vector<int> parse_n_range(const std::string& text) {
  static const std::regex form(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) {
    throw InvalidArgument(fmt::format("n-range '{}' is not of the form a..b", text));
  }
  const int lo = std::stoi(m[1]), hi = std::stoi(m[2]);
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw InvalidArgument(fmt::format("grid '{}' is not lo:hi:step", text));
  const double lo = parse_number(parts[0], "grid start");
  const double hi = parse_number(parts[1], "grid end");
  const double step = parse_number(parts[2], "grid step");
  if (!(step > 0.0)) throw InvalidArgument("grid step must be > 0");
  std::vector<double> out;
  if (hi < lo) return out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

DensityState build_state(const StateSpec& s, int cutoff) {
  switch (s.kind) {
    case StateSpec::Kind::kFock:
      if (s.n >= cutoff) {
        throw CutoffTooSmall(fmt::format("fock:{} needs a cutoff above {}", s.n, s.n));
      }
      return DensityState::fock(s.n, cutoff);
    case StateSpec::Kind::kMixture:
      return mixture_state(s.mixture, cutoff, kStateTail);
    case StateSpec::Kind::kGaussian:
      break;
  }
  return synthesize(s.gaussian, cutoff, kStateTail);
}

int default_cutoff(const StateSpec& s) {
  if (s.kind == StateSpec::Kind::kFock) return std::max(60, 8 * s.n + 40);
  // Optimal Gaussians sit near the reference one; give it room to lose < 1e-8.
  const GaussianParams ref = reference_gaussian(build_state(s, cutoff_for_tail(s, 1e-14)));
  for (int n = 40; n <= 400; n += 10) {
    if (synthesize_matrix(ref, n).tail_mass <= 1e-8) return n;
  }
  throw InvalidArgument(fmt::format("state '{}' needs a cutoff above 400", s.label));
}

int default_witness_cutoff(const StateSpec& s) {
  if (s.kind == StateSpec::Kind::kFock) return s.n + 4;
  return std::max(4, cutoff_for_tail(s, 1e-14));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness of non-Gaussianity: closed forms, witnesses and discrimination tasks",
               "cvrl"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  app.add_option("--cutoff", rc.cutoff, "single-copy Fock cutoff (0: state default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--cutoff2", rc.cutoff2, "per-factor cutoff of two-copy witnesses")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--cutoff4", rc.cutoff4, "per-factor cutoff of four-copy witnesses")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", rc.seed, "seed for every stochastic choice");
  app.add_option("--starts", rc.starts, "multistart count")->check(CLI::PositiveNumber);
  app.add_option("--max-evals", rc.max_evals, "evaluations per start")->check(CLI::PositiveNumber);
  app.add_option("--tol", rc.tol, "relative tolerance for optimizer checks")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sobol", rc.sobol, "Sobol points in the soundness sweep")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--adversarial", rc.adversarial, "adversarial starts in the soundness sweep")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", rc.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", rc.out, "output file (default stdout)");
  app.add_flag("--bits", rc.bits, "entropies in bits");

  std::string n_range = "1..3";
  bool no_optimizer = false;
  auto* fock = app.add_subcommand("fock", "Fock-state closed form against the optimizer");
  fock->add_option("--n-range", n_range, "photon numbers a..b");
  fock->add_flag("--no-optimizer", no_optimizer, "closed form only");

  double q = 0.0;
  std::string d_grid = "0:5:0.1";
  bool with_optimizer = false;
  auto* mixture = app.add_subcommand("mixture", "Lower bounds for coherent-state mixtures");
  mixture->add_option("--q", q, "bias in [-1, 1]");
  mixture->add_option("--d-grid", d_grid, "separations lo:hi:step");
  mixture->add_flag("--optimizer", with_optimizer, "add the optimizer column");

  std::string state;
  int copies = 2;
  auto* witness = app.add_subcommand("witness-demo", "Build and check a multi-copy witness");
  witness->add_option("--state", state, "fock:N | mixture:q=Q,d=D | gaussian:...")->required();
  witness->add_option("--copies", copies, "2 or 4")->check(CLI::IsMember({2, 4}));
  auto* discrim = app.add_subcommand("discrim-demo", "Two-copy discrimination advantage");
  discrim->add_option("--state", state, "fock:N | mixture:q=Q,d=D | gaussian:...")->required();
  auto* entropy = app.add_subcommand("entropy", "Entropies and the relative-entropy bound");
  entropy->add_option("--state", state, "fock:N | mixture:q=Q,d=D | gaussian:...")->required();
  auto* config = app.add_subcommand("config", "Print every default as JSON");

  std::vector<std::string> storage{"cvrl"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }

  try {
    Outcome o;
    if (*fock) o = cmd_fock(rc, n_range, !no_optimizer);
    else if (*mixture) o = cmd_mixture(rc, q, d_grid, with_optimizer);
    else if (*witness) o = cmd_witness_demo(rc, parse_state(state), copies);
    else if (*discrim) o = cmd_discrim_demo(rc, parse_state(state));
    else if (*entropy) o = cmd_entropy(rc, parse_state(state));
    else if (*config) o = cmd_config(rc);
    return emit(o, rc, out, err);
  } catch (const IndistinguishableFromGaussian& e) {
    err << "FAIL: state is Gaussian to numerical precision: " << e.what() << "\n";
    return kCertificateFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidDimension& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CutoffTooSmall& e) {
    err << "error: " << e.what() << " (raise the cutoff)\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "FAIL: " << e.what() << "\n";
    return kCertificateFailure;
  }
}

}  // namespace cvrl::cli
