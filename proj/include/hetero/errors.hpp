#ifndef HETERO_ERRORS_HPP
#define HETERO_ERRORS_HPP

#include <stdexcept>

namespace hetero {

// Error taxonomy mirrors the CLI exit codes: config/usage problems (1),
// numerical failures such as Newton divergence or an unreachable anchor (2),
// and violated run invariants (3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hetero

#endif
