#pragma once

#include <string>
#include <vector>

#include "otfs/harness/config.hpp"

namespace otfs {

struct InvariantCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // worst deviation observed
  double tolerance = 0.0;
};

// Structural invariants of the chain evaluated at the configured sizes with
// the configured seed: basis matrices, precoders, modem equivalence,
// dictionaries, EM, uncertainty matrix and BCRB.
std::vector<InvariantCheck> run_invariant_suite(const ExperimentConfig& config, int draws = 5);

}  // namespace otfs
