#pragma once

#include <stdexcept>
#include <string>

namespace quip {

// Error taxonomy shared by every module. Messages are prefixed with the
// owning module name ("phonetics: ...") so the CLI can attribute failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad option / configuration value.
struct ConfigError : Error {
  using Error::Error;
};

// A required file or directory is missing or unreadable.
struct ResourceError : Error {
  using Error::Error;
};

// A resource file exists but its contents are malformed.
struct ParseError : Error {
  using Error::Error;
};

// Column names, feature counts, or tensor shapes do not line up.
struct SchemaError : Error {
  using Error::Error;
};

// A well-formed value violates a contract (bad label, empty input, ...).
struct ValueError : Error {
  using Error::Error;
};

}  // namespace quip
