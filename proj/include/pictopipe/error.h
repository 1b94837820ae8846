#ifndef PICTOPIPE_ERROR_H_
#define PICTOPIPE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pictopipe {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data. Carries the 1-based row (line) number when the
// problem can be attributed to one record; 0 otherwise.
class DataError : public Error {
 public:
  DataError(const std::string& message, std::size_t row = 0)
      : Error(row == 0 ? message
                       : "row " + std::to_string(row) + ": " + message),
        row_(row) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Caller violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Internal consistency failure (e.g. a segment refers to an entry that is
// not in the lexicon it is rendered against).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace pictopipe

#endif  // PICTOPIPE_ERROR_H_
