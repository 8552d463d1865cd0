#ifndef SNSREC_ERRORS_HPP
#define SNSREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace snsrec {

struct NotPsdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexOutOfRangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct OverlappingSetsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooLargeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedError : std::runtime_error {
  explicit MalformedError(const std::string& what, long line = -1)
      : std::runtime_error(what), line_no(line) {}
  long line_no;
};

struct EmptyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooShortError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidSpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace snsrec

#endif
