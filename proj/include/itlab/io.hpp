#pragma once

#include <string>

#include "itlab/decoder.hpp"
#include "itlab/model.hpp"
#include "itlab/sampling.hpp"

namespace itlab {

/// A generated problem instance: parameters, the factor pair, and the
/// product matrix they define.
struct Instance {
  ModelParams params;
  FactorPair factors;
  ProductMatrix s;
};

Instance make_instance(const ModelParams& params, const SeedSpec& seed);

/// {"m", "r", "q", "semiring", "u", "v", "s"} with matrices as row lists.
/// s is redundant and optional on load; when present it is recomputed and
/// verified, and a mismatch is a ValidationError.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

/// {"m", "locations": [[row, col], ...]}.
std::string locations_to_json(const LocationSequence& locs);
LocationSequence locations_from_json(const std::string& text);

/// Whole-file helpers; failures raise IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace itlab
