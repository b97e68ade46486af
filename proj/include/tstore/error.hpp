#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tstore {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's preconditions (arity mismatch, bad config).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A bounded structure (static container, chopper table) is full.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The block device has no free block left.
class StorageFullError : public CapacityError {
 public:
  using CapacityError::CapacityError;
};

/// A dictionary key or record address is dead or out of range.
class InvalidKeyError : public Error {
 public:
  using Error::Error;
};

/// Input could not be encoded by the codec.
class EncodingError : public Error {
 public:
  EncodingError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Encoded data does not decode under the given tree.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// On-disk or serialized structure has a bad magic, version or layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A cursor was advanced after the structure it iterates was mutated.
class IterationInvalidatedError : public Error {
 public:
  using Error::Error;
};

}  // namespace tstore
