#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bergman {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Argument outside the unit disk or outside an operation's parameter range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration (orders, sizes, grids).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value, lost definiteness, or failed to
/// converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_point(Complex z);

inline void require_in_disk(Complex z, const char* what) {
  if (!(std::abs(z) < 1.0)) {
    throw DomainError(std::string(what) + ": point " + format_point(z) +
                      " is not inside the unit disk");
  }
}

}  // namespace bergman
