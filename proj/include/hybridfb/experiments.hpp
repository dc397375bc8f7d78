// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers: run a configured sweep, write per-drop and aggregate
// CSV files plus replay material into an output directory.

#pragma once

#include <string>

#include "hybridfb/config.hpp"

namespace hybridfb {

// Returns 0 on success. Creates out_dir if needed. Writes:
//   results.csv         one row per (scheme, grid point, drop)
//   aggregate.csv       one row per (scheme, grid point), drop-pooled
//   classification.csv  per-drop user splits (experiments that classify)
//   drops/drop_D.txt    replay manifests
void seed_note(const ExperimentConfig& cfg, const std::string& out_dir);
int run_experiment(const ExperimentConfig& cfg);

} // namespace hybridfb
