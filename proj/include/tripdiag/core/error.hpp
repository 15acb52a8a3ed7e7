// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tripdiag {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: catalog files, queries, plan documents, case files.
class DataError : public Error {
public:
  using Error::Error;
};

/// Invalid command-line or API usage.
class UsageError : public Error {
public:
  using Error::Error;
};

/// The agent endpoint could not be reached at all.
class EndpointError : public Error {
public:
  using Error::Error;
};

/// Constraint text that does not follow the grammar.
class ParseError : public Error {
public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
      : Error(format(message, offset, expected)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  static std::string format(const std::string& message, std::size_t offset,
                            const std::vector<std::string>& expected) {
    std::string out = "parse error at byte " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected one of:";
      for (const auto& e : expected) out += " " + e;
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Well-formed constraint text whose operands have incompatible types.
class TypeError : public Error {
public:
  using Error::Error;
};

}  // namespace tripdiag
