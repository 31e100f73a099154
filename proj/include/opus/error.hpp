#pragma once

#include <stdexcept>
#include <string>

namespace opus {

// Error taxonomy shared by the library and the CLI exit-code mapping.
enum class ErrorKind {
  io,           // unreadable/unwritable paths, undecodable input
  validation,   // bad parameter values
  empty_input,  // empty corpus, empty query
  dimension,    // vector/matrix dimension mismatch
  consistency,  // internal invariant violated (missing stem, missing weight)
  format,       // malformed container file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error io_error(const std::string& msg) { return Error(ErrorKind::io, msg); }
inline Error validation_error(const std::string& msg) { return Error(ErrorKind::validation, msg); }
inline Error empty_input_error(const std::string& msg) { return Error(ErrorKind::empty_input, msg); }
inline Error dimension_error(const std::string& msg) { return Error(ErrorKind::dimension, msg); }
inline Error consistency_error(const std::string& msg) { return Error(ErrorKind::consistency, msg); }
inline Error format_error(const std::string& msg) { return Error(ErrorKind::format, msg); }

}  // namespace opus
