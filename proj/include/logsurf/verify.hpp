#pragma once

#include <string>
#include <vector>

#include "logsurf/core.hpp"

namespace logsurf {

// One verification criterion: a named bundle of measurements with pinned
// tolerances. `detail` lists each measurement against its bound.
struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

// Criteria are numbered 1..10; throws config_error outside that range.
CheckResult run_criterion(int k, ExecMode mode = ExecMode::Parallel);

// Suite names: pde-residual, curvature-integrals, solver-oracle, uniqueness,
// symmetry, kappa-bounds, barrier, mc-consistency, all.
const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);
SuiteResult run_suite(const std::string& suite, ExecMode mode = ExecMode::Parallel);

} // namespace logsurf
