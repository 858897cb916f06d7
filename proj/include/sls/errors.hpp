#ifndef SLS_ERRORS_HPP
#define SLS_ERRORS_HPP

#include <stdexcept>
#include <string>

#include "sls/types.hpp"

namespace sls {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The requested column lies in the span of the current support.
struct DegenerateAtom : std::runtime_error {
  Index atom;
  explicit DegenerateAtom(Index a)
      : std::runtime_error("degenerate atom " + std::to_string(a)), atom(a) {}
};

struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Active Gram matrix lost positive definiteness (duplicate/dependent atoms).
struct SingularGram : std::runtime_error {
  Index atom;
  explicit SingularGram(Index a)
      : std::runtime_error("singular gram update for column " + std::to_string(a)), atom(a) {}
};

struct ZeroColumn : std::runtime_error {
  Index column;
  explicit ZeroColumn(Index c)
      : std::runtime_error("zero column " + std::to_string(c)), column(c) {}
};

struct NotNormalized : std::logic_error {
  using std::logic_error::logic_error;
};

// Penalized subproblem has an identically zero solution for every penalty.
struct EmptySolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasiblePlacement : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroSignal : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Adversarial-instance sweep found no separation with the required property.
struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration guard tripped.
struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace sls

#endif
