#pragma once

#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pqfreq {

// Bad user input: malformed spec, inadmissible exponents, out-of-range
// parameters. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request that the grid cannot represent (node budget,
// unresolved perforation radius).
class ResolutionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;

// First zero of the Bessel function J0, to 9 digits.
inline constexpr double kJ01 = 2.404825558;

// Volume of the unit ball in R^N.
double unit_ball_volume(int N);

// Writes through a temporary file in the same directory and renames it into
// place. Throws ValidationError when the path is not writable.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace pqfreq
