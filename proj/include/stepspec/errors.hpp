#pragma once

#include <stdexcept>
#include <string>

namespace stepspec {

/// Numerical failure (non-convergence, lost bracket, ...).  Validation
/// problems use std::invalid_argument instead.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string& what_, double bracket_lo = 0.0,
                        double bracket_hi = 0.0)
      : std::runtime_error(what_), bracket_lo(bracket_lo), bracket_hi(bracket_hi) {}

  double bracket_lo;
  double bracket_hi;
};

}  // namespace stepspec
