// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace logprep {

enum class ErrorKind {
  InvalidInput,
  Parse,
  Decode,
  DegenerateCell,
  UnsupportedLift,
  ScaleBreakdown,
  NotLogAnalytic,
  CannotConstruct,
  Internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public Error {
public:
  ParseError(SourceSpan span, std::string expected, std::string found);
  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

class DecodeError : public Error {
public:
  DecodeError(std::string path, const std::string& message)
      : Error(ErrorKind::Decode, path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

class ScaleBreakdown : public Error {
public:
  explicit ScaleBreakdown(int level)
      : Error(ErrorKind::ScaleBreakdown, "scale breakdown: y_" + std::to_string(level - 1) + " vanishes at level " +
                                             std::to_string(level)),
        level_(level) {}
  int level() const { return level_; }

private:
  int level_;
};

class DegenerateCell : public Error {
public:
  explicit DegenerateCell(std::vector<double> t);
  const std::vector<double>& t() const { return t_; }

private:
  std::vector<double> t_;
};

}  // namespace logprep
