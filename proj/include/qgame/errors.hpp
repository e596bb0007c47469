#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

// Parameter outside its admissible interval (theta, phi, r, probabilities).
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NonUnitary : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A density matrix or outcome distribution that violates its invariants.
class InvalidState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnknownGame : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed game-definition file or report input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qgame
