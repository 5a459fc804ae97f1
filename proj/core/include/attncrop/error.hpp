#pragma once

#include <stdexcept>
#include <string>

namespace attncrop {

/// Malformed argument: empty raster, mismatched dimensions, out-of-range box.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration outside its documented domain (e.g. lambda >= 1).
class InvalidConfig : public std::invalid_argument {
 public:
  explicit InvalidConfig(const std::string& what) : std::invalid_argument(what) {}
};

/// No pixel passed the crop threshold. attention_crop() turns this into a fallback.
class EmptySelection : public std::runtime_error {
 public:
  explicit EmptySelection(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read, decoded, encoded or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace attncrop
