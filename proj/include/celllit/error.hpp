#pragma once

#include <stdexcept>
#include <string>

namespace celllit {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file could not be parsed or violates its documented schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Ontology content is inconsistent (duplicates, dangling parents, cycles).
class OntologyError : public Error {
 public:
  using Error::Error;
};

// A persisted graph is truncated, corrupted, or has an unsupported version.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// A queried entity, edge, or profile does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Configuration failed validation before any work started.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed; carries the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace celllit
