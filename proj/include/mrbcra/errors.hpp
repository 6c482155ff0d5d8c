// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace mrbcra {

struct InvalidConfig : std::runtime_error {
  explicit InvalidConfig(const std::string& what) : std::runtime_error("InvalidConfig: " + what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error("DomainError: " + what) {}
};

struct NoSteadyState : std::runtime_error {
  explicit NoSteadyState(const std::string& what) : std::runtime_error("NoSteadyState: " + what) {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what) : std::runtime_error("InsufficientData: " + what) {}
};

struct InsufficientSamples : std::runtime_error {
  explicit InsufficientSamples(const std::string& what)
      : std::runtime_error("InsufficientSamples: " + what) {}
};

struct MissingColumn : std::runtime_error {
  explicit MissingColumn(const std::string& what) : std::runtime_error("MissingColumn: " + what) {}
};

}  // namespace mrbcra
