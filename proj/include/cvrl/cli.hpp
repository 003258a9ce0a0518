#pragma once

// Command-line front end. All logic lives here so tests can drive it; the
// executable only forwards argv.
//
// Exit codes: 0 all checks passed, 1 usage error, 2 a certificate failed.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvrl/case_studies.hpp"
#include "cvrl/fock.hpp"
#include "cvrl/gaussian.hpp"

namespace cvrl::cli {

enum ExitCode : int { kPass = 0, kUsage = 1, kCertificateFailure = 2 };

struct RunConfig {
  int cutoff = 0;   // single-copy computations; 0 picks a state-dependent default
  int cutoff2 = 0;  // per-factor cutoff of two-copy witnesses
  int cutoff4 = 0;  // per-factor cutoff of four-copy witnesses
  std::uint64_t seed = 20240611;
  int starts = 12;
  int max_evals = 2000;
  double tol = 0.01;  // relative tolerance for optimizer-vs-closed-form checks
  int sobol = 500;
  int adversarial = 50;
  std::string format = "csv";
  std::string out;  // empty: stdout
  bool bits = false;
};

struct StateSpec {
  enum class Kind { kFock, kMixture, kGaussian };
  Kind kind = Kind::kFock;
  int n = 0;
  MixtureSpec mixture;
  GaussianParams gaussian;
  std::string label;  // the text it was parsed from

  /// n for Fock states, d for mixtures, NaN otherwise.
  double d_or_n() const;
};

/// "fock:N", "mixture:q=Q,d=D", "gaussian:vacuum" or
/// "gaussian:nbar=..,r=..,phi=..,re=..,im=.." (missing keys are 0).
/// Throws InvalidArgument on malformed text.
StateSpec parse_state(const std::string& text);

/// "a..b" inclusive. Throws InvalidArgument.
std::vector<int> parse_n_range(const std::string& text);

/// "lo:hi:step" inclusive of hi up to rounding. Throws InvalidArgument.
std::vector<double> parse_grid(const std::string& text);

/// Cutoff for robustness runs: max(60, 8n+40) for Fock states, otherwise the
/// smallest multiple of 10 (at least 40) at which the reference Gaussian loses
/// at most 1e-8.
int default_cutoff(const StateSpec& s);

/// Per-factor cutoff for witnesses: n+4 for Fock states, otherwise the
/// cutoff holding all but 1e-14 of the state.
int default_witness_cutoff(const StateSpec& s);

/// The state at the given cutoff (tail guard 1e-10).
DensityState build_state(const StateSpec& s, int cutoff);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvrl::cli
