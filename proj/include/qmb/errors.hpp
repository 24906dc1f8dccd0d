#pragma once

#include <stdexcept>
#include <string>

namespace qmb {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands carry different domain kinds, or an operation was asked of a
// domain that does not support it.
class domain_mismatch : public error {
 public:
  using error::error;
};

class unknown_state : public error {
 public:
  using error::error;
};

// Every run consistent with the observation sequence has plausibility
// bottom; conditioning on such evidence is undefined.
class inconsistent_evidence : public error {
 public:
  using error::error;
};

// An exhaustive check or enumeration would exceed its configured size cap.
class cap_exceeded : public error {
 public:
  using error::error;
};

class length_mismatch : public error {
 public:
  using error::error;
};

// The order constraints are contradictory: some strict relation's reverse
// weak relation is derivable from the closure.
class constraint_cycle : public error {
 public:
  using error::error;
};

class unsafe_constraints : public error {
 public:
  using error::error;
};

class validation_error : public error {
 public:
  using error::error;
};

class value_error : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  parse_error(int line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace qmb
