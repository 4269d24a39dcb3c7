#pragma once

#include <stdexcept>
#include <string>

namespace dopt {

enum class ErrorCode {
  kInput,             // malformed or missing input
  kDimension,         // inconsistent matrix/vector sizes
  kGenerator,         // invalid Markov generator
  kReducible,         // stationary distribution not unique
  kNotHurwitz,
  kNoSolution,        // regulator equations unsolvable
  kHistoryUnderflow,
  kDivergence,
  kResource,
  kInfeasible,
  kUndecided,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dopt
