#pragma once

#include <stdexcept>
#include <string>

namespace twrc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named input field violates its invariant (negative gain, mu outside [0,1], ...).
class InvalidInput : public Error {
 public:
  InvalidInput(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class CoincidentNodes : public InvalidInput {
 public:
  CoincidentNodes(const std::string& pair)
      : InvalidInput(pair, "nodes coincide (infinite link gain)") {}
};

/// Power allocation breaks one of the three budget constraints.
class InfeasibleAllocation : public Error {
 public:
  InfeasibleAllocation(std::string constraint, const std::string& what)
      : Error(constraint + ": " + what), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// A closed form was asked for gains outside the regime it covers.
class WrongRegime : public Error {
 public:
  using Error::Error;
};

/// The technique table does not cover g12^2(1+gr1^2 P) > g12^2+g1r^2; use the numeric solver.
class UnsupportedSideCondition : public Error {
 public:
  using Error::Error;
};

class NoRoot : public Error {
 public:
  using Error::Error;
};

class GridCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace twrc
