#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dao {

// Base of every error the engine raises. Subclasses carry the condition name
// so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DuplicateType : public Error {
 public:
  explicit DuplicateType(const std::string& id) : Error("duplicate event type: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class UnknownEventType : public Error {
 public:
  explicit UnknownEventType(const std::string& id) : Error("unknown event type: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class SpanNotInSentence : public Error {
 public:
  SpanNotInSentence(const std::string& sentence_id, const std::string& span)
      : Error("span \"" + span + "\" not found in sentence " + sentence_id) {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("cannot normalize a zero vector") {}
};

// Anything that went wrong talking to a model backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

class TransportError : public BackendError {
 public:
  using BackendError::BackendError;
};

class HttpStatus : public BackendError {
 public:
  HttpStatus(int status, const std::string& body)
      : BackendError("HTTP status " + std::to_string(status) + ": " + body), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class RateLimited : public BackendError {
 public:
  explicit RateLimited(int attempts)
      : BackendError("rate limited after " + std::to_string(attempts) + " attempts") {}
};

class MalformedResponse : public BackendError {
 public:
  using BackendError::BackendError;
};

class ScriptExhausted : public BackendError {
 public:
  explicit ScriptExhausted(const std::string& name)
      : BackendError("script exhausted for agent " + name) {}
};

class NoMatch : public BackendError {
 public:
  NoMatch(const std::string& name, const std::string& digest)
      : BackendError("no script entry of agent " + name + " matches message " + digest),
        digest_(digest) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

class EmptyText : public BackendError {
 public:
  EmptyText() : BackendError("cannot embed empty text") {}
};

class EmptyCalibrationSet : public Error {
 public:
  EmptyCalibrationSet() : Error("calibration set is empty") {}
};

class MissingBinding : public Error {
 public:
  explicit MissingBinding(const std::string& name)
      : Error("missing binding for placeholder " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ParseFailure : public Error {
 public:
  explicit ParseFailure(const std::string& digest)
      : Error("could not parse agent reply " + digest), digest_(digest) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

class NoTableFound : public Error {
 public:
  NoTableFound() : Error("no table found") {}
};

class HeaderMismatch : public Error {
 public:
  explicit HeaderMismatch(const std::string& header) : Error("unexpected table header: " + header) {}
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace dao
