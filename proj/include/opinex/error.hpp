#ifndef OPINEX_ERROR_HPP_
#define OPINEX_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace opinex {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be parsed. The message carries a line or record locator.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Cross-role overlap seen while encoding spans to BIO.
class EncodeError : public Error {
 public:
  using Error::Error;
};

// Caller asked for something the inputs cannot support (e.g. training on an
// empty dataset, single-class relation data).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Pipeline configuration problem. field() names the offending key.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string field, const std::string& what)
      : ValidationError("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Failure inside a pipeline stage; stage() is e.g. "train-tagger".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace opinex

#endif  // OPINEX_ERROR_HPP_
