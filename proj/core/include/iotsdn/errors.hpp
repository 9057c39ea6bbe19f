#pragma once

#include <stdexcept>
#include <string>

namespace iotsdn {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Topology construction and path queries.
class DuplicateNode : public Error {
 public:
  using Error::Error;
};
class DuplicateLink : public Error {
 public:
  using Error::Error;
};
class UnknownEndpoint : public Error {
 public:
  using Error::Error;
};
class NoPath : public Error {
 public:
  using Error::Error;
};
class UnknownLink : public Error {
 public:
  using Error::Error;
};

// Bandwidth ledger.
class InvalidConstraints : public Error {
 public:
  using Error::Error;
};
class UnknownReservation : public Error {
 public:
  using Error::Error;
};
class DuplicateReservation : public Error {
 public:
  using Error::Error;
};
class InsufficientHeadroom : public Error {
 public:
  using Error::Error;
};

// Aggregator and orchestrator.
class ForeignTopic : public Error {
 public:
  using Error::Error;
};
class UnknownTopic : public Error {
 public:
  using Error::Error;
};
class DuplicateSubscription : public Error {
 public:
  using Error::Error;
};
class UnknownSubscription : public Error {
 public:
  using Error::Error;
};

// Controller and data plane.
class UnknownFlow : public Error {
 public:
  using Error::Error;
};
class UnroutedDemand : public Error {
 public:
  using Error::Error;
};

// Scenario documents.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace iotsdn
