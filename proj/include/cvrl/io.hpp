#pragma once

// JSON encodings of the library's value types. Doubles are written with
// round-trip precision; NaN and infinities become null.

#include <nlohmann/json.hpp>

#include "cvrl/case_studies.hpp"
#include "cvrl/discrimination.hpp"
#include "cvrl/gaussian.hpp"
#include "cvrl/optimize.hpp"
#include "cvrl/robustness.hpp"
#include "cvrl/witness.hpp"

namespace cvrl {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers, everything else as null.
Json number_or_null(double v);

void to_json(Json& j, const GaussianParams& p);
void from_json(const Json& j, GaussianParams& p);
void to_json(Json& j, const MomentForm& m);
void from_json(const Json& j, MomentForm& m);
void to_json(Json& j, const ParameterBox& b);
void from_json(const Json& j, ParameterBox& b);
void to_json(Json& j, const OptimizerConfig& c);
void from_json(const Json& j, OptimizerConfig& c);
void to_json(Json& j, const SoundnessConfig& c);
void to_json(Json& j, const HomodyneConfig& c);
void to_json(Json& j, const StartRecord& r);
void to_json(Json& j, const RobustnessResult& r);
void to_json(Json& j, const WitnessEvaluation& e);
/// {m, epsilon, op_norm, min_eigenvalue, max_eigenvalue, evaluations, heuristic_flags}.
void to_json(Json& j, const WitnessReport& w);
void to_json(Json& j, const SoundnessReport& r);
/// Task metadata; the X matrix itself is not serialized.
void to_json(Json& j, const DiscriminationTask& t);
void to_json(Json& j, const GaussianSup& s);
void to_json(Json& j, const Fig3Row& r);
void to_json(Json& j, const Fig4Row& r);

}  // namespace cvrl
