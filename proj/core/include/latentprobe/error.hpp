#pragma once

#include <stdexcept>
#include <string>

namespace latentprobe {

// Bad user input: missing files, malformed formats, out-of-range parameters.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation could not proceed (degenerate corpus, zero variance, ...).
// The CLI maps this to exit code 3.
class ComputeError : public std::runtime_error {
 public:
  explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace latentprobe
