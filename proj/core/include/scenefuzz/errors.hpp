#pragma once

#include <stdexcept>
#include <string>

namespace scenefuzz {

// Bad or inconsistent configuration (unknown map id, missing tracker, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure, distinct from parse errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mutation could not produce a valid child within the retry budget.
struct MutationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Frame streams that violate the matching preconditions.
struct MatchError : std::runtime_error {
  int frame_index;
  MatchError(int frame, const std::string& what)
      : std::runtime_error(what), frame_index(frame) {}
};

}  // namespace scenefuzz
