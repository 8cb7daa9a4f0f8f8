#pragma once

#include <string>

#include "nldiv/config.hpp"

// Batch dispatch: one experiment in, one CSV table out.  Exit status is
// nonzero iff an acceptance assertion inside the experiment failed.

namespace nldiv {

struct RunResult {
  int exit_code = 0;
  std::string csv;
};

RunResult run_experiment(const ExperimentConfig& cfg);

} // namespace nldiv
