#pragma once

#include <map>
#include <string>

namespace logsurf {

// Flat `key = value` configuration, keys namespaced (solver.beta,
// mc.n_particles). Subcommand flags land in the same map before the run;
// the CLI layer logs flag-over-file overrides to stderr.
using Options = std::map<std::string, std::string>;

// Parses a flat key = value file. '#' starts a comment, blank lines are
// skipped, whitespace around keys and values is trimmed. Throws config_error
// on a line without '=' or an empty key.
Options parse_config_file(const std::string& path);

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConvergence = 3;
inline constexpr int kExitVerification = 4;

// Subcommand bodies. Each may throw config_error (exit 2) or
// convergence_error (exit 3); run_verify returns kExitVerification when any
// criterion fails. Output files are written atomically into the directory
// named by output.dir, the LOGSURF_OUTPUT_DIR environment variable, or the
// working directory, in that order.
int run_closed_form(const Options& opt);
int run_solve(const Options& opt);
int run_sample(const Options& opt);
int run_verify(const Options& opt);

} // namespace logsurf
