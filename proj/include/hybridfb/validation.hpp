// SPDX-License-Identifier: Apache-2.0
//
// Release acceptance suite shared by `hybridfb validate` and the dedicated
// acceptance binary: one pass/fail line per criterion with measured values.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybridfb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // measured values / reason
    double seconds = 0.0;
};

// Runs all criteria in order, streaming one line each to `log`.
std::vector<CriterionResult> run_validation_suite(std::ostream& log, unsigned threads);

// True when every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

} // namespace hybridfb
