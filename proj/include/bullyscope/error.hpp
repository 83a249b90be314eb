#ifndef BULLYSCOPE_ERROR_HPP
#define BULLYSCOPE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bullyscope {

// Three failure families, mapped onto process exit codes by the CLI.
//   UsageError   - bad arguments or configuration (exit 2)
//   DataError    - malformed or inconsistent input data (exit 3)
//   NumericError - a quantity is mathematically undefined (exit 4)

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bullyscope

#endif  // BULLYSCOPE_ERROR_HPP
