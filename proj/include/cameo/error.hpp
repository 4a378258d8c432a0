#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cameo {

/// Base for every error the library raises. kind() is a stable
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string_view kind_;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error("shape", w) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error("numeric", w) {}
};
struct InputError : Error {
  explicit InputError(const std::string& w) : Error("input", w) {}
};
struct EncodingError : Error {
  explicit EncodingError(const std::string& w) : Error("encoding", w) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& w) : Error("unsupported", w) {}
};
struct ParseError : Error {
  ParseError(const std::string& w, long line) : Error("parse", w), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};
struct NotFoundError : Error {
  explicit NotFoundError(const std::string& w) : Error("not_found", w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config", w) {}
};

}  // namespace cameo
