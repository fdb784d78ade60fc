#ifndef LOGSURF_ERRORS_HPP
#define LOGSURF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace logsurf {

// Invalid user-facing configuration (bad parameters, inadmissible beta,
// conflicting kappa/beta, malformed config file). CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative procedure failed to reach its tolerance (solver hit
// max_iterations, quadrature refinement disagreement). CLI exit code 3.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace logsurf

#endif
