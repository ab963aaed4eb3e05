#pragma once

#include "levyscale/model.hpp"

#include <iosfwd>
#include <string>

namespace levyscale {

// Parses a model document:
//   { "sigma": <num>, "drift": <num>, "jumps": { "type": ..., ... } }
// jump blocks:
//   hyperexponential: { "type": "hyperexponential", "lambda", "weights", "rates" }
//                     or "pairs": [ { "weight": w, "rate": r }, ... ]
//                     (pairs may come in any order; they are sorted by rate)
//   phase_type:       { "type": "phase_type", "lambda", "alpha", "T" }
//   beta_family:      { "type": "beta_family", "c", "alpha", "beta", "shape" }
//   cgmy:             { "type": "cgmy", "c", "alpha", "shape" }
// Malformed input throws ValidationError. The returned model is validated.
SpectralModel model_from_json(const std::string& text);
SpectralModel model_from_json_file(const std::string& path);

// Serialises a model back to the schema above (stable key order).
std::string model_to_json(const SpectralModel& m);

} // namespace levyscale
