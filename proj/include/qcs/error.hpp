#pragma once

#include <stdexcept>
#include <string>

namespace qcs {

/// Parse failure with the 1-based source line it occurred on.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace qcs
