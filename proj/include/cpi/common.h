#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cpi {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that does not conform to a documented file format. `location` is
// "path:line" or "record N" and is prefixed to the message.
class FormatError : public Error {
 public:
  FormatError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// Data that parses but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Configures the process-wide logger from OVERLAP_RE_LOG
// ({error, info, debug}; default info). Safe to call more than once.
void init_logging();

// 64-bit FNV-1a, used for content fingerprints written into files.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace cpi
