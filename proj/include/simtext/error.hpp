#pragma once

#include <stdexcept>
#include <string>

namespace simtext {

// File, network, or input-format failure. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or a computation that cannot proceed. CLI exit code 1.
class AnalysisError : public std::runtime_error {
public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace simtext
