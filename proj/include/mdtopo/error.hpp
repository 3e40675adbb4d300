#pragma once

#include <stdexcept>
#include <string>

namespace mdtopo {

// Malformed or inconsistent input data (files, meshes, diagrams).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters: quantization levels, q, epsilon, field order.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mdtopo
