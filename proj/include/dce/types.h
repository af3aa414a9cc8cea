#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dce {

// Halfedge and vertex indices. Dense, 0-based; -1 marks "none".
using Index = std::int32_t;
inline constexpr Index kNone = -1;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised when a connectivity or symmetry invariant is found broken during an
// operation (as opposed to validate(), which reports diagnostics).
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for caller contract violations (e.g. gradient requested on a state
// that has not been made Delaunay).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input data that cannot describe a valid problem instance.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dce
