#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weaklie {

/// Root of every error the toolkit raises on user input or failed preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, std::string detail = {})
      : Error("syntax error at " + std::to_string(position) + ": expected " + expected +
              (detail.empty() ? std::string() : " (" + detail + ")")),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : Error("unknown identifier '" + name + "' at " + std::to_string(position)), position_(position), name_(name) {}
  std::size_t position() const { return position_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t position_;
  std::string name_;
};

class ArityMismatch : public Error {
 public:
  ArityMismatch(std::size_t position, const std::string& name, int expected, int got)
      : Error("function '" + name + "' expects " + std::to_string(expected) + " argument(s), got " +
              std::to_string(got) + " at " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvaluationDomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// The two routes for L_xi Gamma disagree: an internal sign-convention bug, not user error.
class ConventionMismatch : public Error {
 public:
  using Error::Error;
};

class NotInvolutive : public Error {
 public:
  using Error::Error;
};

class RankDeficientFrame : public Error {
 public:
  using Error::Error;
};

class UnknownExample : public Error {
 public:
  using Error::Error;
};

class MissingParameter : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace weaklie
