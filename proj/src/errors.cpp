// SPDX-License-Identifier: Apache-2.0
#include "logprep/errors.hpp"

#include <sstream>

namespace logprep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Decode: return "decode-error";
    case ErrorKind::DegenerateCell: return "degenerate-cell";
    case ErrorKind::UnsupportedLift: return "unsupported-lift";
    case ErrorKind::ScaleBreakdown: return "scale-breakdown";
    case ErrorKind::NotLogAnalytic: return "not-log-analytic";
    case ErrorKind::CannotConstruct: return "cannot-construct";
    case ErrorKind::Internal: return "internal-error";
  }
  return "error";
}

namespace {

std::string parse_message(const SourceSpan& span, const std::string& expected, const std::string& found) {
  std::ostringstream os;
  os << "parse error at offset " << span.start << " (line " << span.line << ", column " << span.column << "): expected "
     << expected << ", found " << found;
  return os.str();
}

std::string degenerate_message(const std::vector<double>& t) {
  std::ostringstream os;
  os.precision(17);
  os << "degenerate cell: fiber bounds cross at t = (";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
  os << ")";
  return os.str();
}

}  // namespace

ParseError::ParseError(SourceSpan span, std::string expected, std::string found)
    : Error(ErrorKind::Parse, parse_message(span, expected, found)),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

DegenerateCell::DegenerateCell(std::vector<double> t)
    : Error(ErrorKind::DegenerateCell, degenerate_message(t)), t_(std::move(t)) {}

}  // namespace logprep
