#ifndef LCERT_ERROR_HPP
#define LCERT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcert {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

// Ill-typed or non-admissible source program.
class TypeError : public Error {
  public:
    using Error::Error;
};

// Recursive call that is not structurally smaller.
class GuardError : public Error {
  public:
    using Error::Error;
};

// Missing dictionary entry, ordering violation, forbidden higher-order shape.
class ExtractError : public Error {
  public:
    using Error::Error;
};

// Value does not fit a datatype, missing registration, injectivity failure.
class EncodingError : public Error {
  public:
    using Error::Error;
};

} // namespace lcert

#endif
