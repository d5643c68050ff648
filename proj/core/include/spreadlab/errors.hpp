#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spreadlab {

// Root of every error thrown by the library. Subclasses carry the
// condition name so callers can branch on type, and the CLI maps them to
// diagnostics.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EmptySide : public Error {
public:
  EmptySide() : Error("book side has no resting volume") {}
};

class CrossingOrder : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class EmptySeries : public Error {
public:
  EmptySeries() : Error("event series is empty") {}
  using Error::Error;
};

class NoSuchSpread : public Error {
public:
  using Error::Error;
};

class NoConditioningEvents : public Error {
public:
  using Error::Error;
};

class SeriesTooShort : public Error {
public:
  using Error::Error;
};

class ZeroVariance : public Error {
public:
  using Error::Error;
};

class InsufficientSamples : public Error {
public:
  using Error::Error;
};

class OrderingError : public Error {
public:
  OrderingError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, std::string reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  std::size_t line_;
  std::string reason_;
};

class OffGridPrice : public Error {
public:
  OffGridPrice(std::size_t line, double price, double residual)
      : Error("line " + std::to_string(line) + ": price " + std::to_string(price) +
              " is off the tick grid (residual " + std::to_string(residual) + ")"),
        line_(line),
        residual_(residual) {}
  std::size_t line() const noexcept { return line_; }
  double residual() const noexcept { return residual_; }

private:
  std::size_t line_;
  double residual_;
};

}  // namespace spreadlab
