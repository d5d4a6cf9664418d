#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solbench {

/// Base of every exception thrown by the core library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phase-1 output that is not a JSON object of the expected shape.
class MalformedSchema : public Error {
 public:
  using Error::Error;
};

/// Source text contains no `contract` declaration.
class UnparseableSource : public Error {
 public:
  using Error::Error;
};

/// A numeric argument outside its documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Model response that carries no Solidity code.
class NotSolidity : public Error {
 public:
  using Error::Error;
};

/// Chat backend could not be reached after all retries.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

/// Model response larger than the configured cap.
class ResponseTooLarge : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, or written.
class IoFailure : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration file or value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace solbench
