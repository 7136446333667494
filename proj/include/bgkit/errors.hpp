#pragma once

#include <stdexcept>
#include <string>

namespace bgkit {

// A query would need support points beyond a space's or measure's enumerable window.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hypotheses of an operation (positivity of masses, exact-search feasibility...) fail.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bgkit
