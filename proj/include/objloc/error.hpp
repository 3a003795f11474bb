#pragma once

#include <stdexcept>

namespace objloc {

/// Base class for every error the library reports.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MissingFileError : public Error {
public:
  using Error::Error;
};

/// Unsupported container, bit depth or channel layout.
class FormatError : public Error {
public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

}  // namespace objloc
