#ifndef NPP_ERROR_HPP
#define NPP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace npp {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input text; carries the byte offset reported by the parser.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

// Well-formed input that violates an instance invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

// Caller violated a documented precondition (dimension mismatch, wrong arc count...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

// An exhaustive search would exceed its configured budget.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

}  // namespace npp

#endif
