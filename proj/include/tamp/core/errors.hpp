#pragma once

#include <stdexcept>
#include <string>

namespace tamp {

// Malformed input documents (bad JSON, missing fields, wrong types).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// EM could not produce a usable mixture (degenerate data, no convergence).
class FitFailure : public std::runtime_error {
public:
  explicit FitFailure(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateInput : public std::runtime_error {
public:
  explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tamp
