#include "gipsa/errors.hpp"

namespace gipsa {

NumericalDivergence::NumericalDivergence(std::int64_t iteration,
                                         const std::string& what)
    : std::runtime_error("diverged at iteration " + std::to_string(iteration) +
                         ": " + what),
      iteration_(iteration) {}

}  // namespace gipsa
