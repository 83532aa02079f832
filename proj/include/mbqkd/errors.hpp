#ifndef MBQKD_ERRORS_HPP
#define MBQKD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mbqkd {

// Bad user input: malformed files, out-of-range parameters, tables that
// fail structural validation.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Expansion bases are (numerically) parallel, so the target state has no
// well-defined coefficients.
class DegenerateBasisError : public ValidationError {
public:
  explicit DegenerateBasisError(const std::string& what) : ValidationError(what) {}
};

// The basis-0 announcement probabilities sum to zero: there are no sifted
// events, hence no error statistics and no defined key rate.
class NoClicksError : public std::runtime_error {
public:
  explicit NoClicksError(const std::string& what) : std::runtime_error(what) {}
};

// The constraint region of the deviation maximization is empty inside the
// search box: the supplied statistics are mutually inconsistent.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mbqkd

#endif
