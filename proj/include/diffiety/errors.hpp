#pragma once

#include <stdexcept>
#include <string>

namespace diffiety {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A denominator vanished identically.
class DegenerateExpression : public Error {
public:
  using Error::Error;
};

/// Numerical evaluation hit a zero denominator; retry with another point.
class PoleAtPoint : public Error {
public:
  using Error::Error;
};

/// Elimination could not decide whether a pivot candidate vanishes.
class UndecidedPivot : public Error {
public:
  UndecidedPivot(const std::string& expr)
      : Error("undecided pivot: cannot certify " + expr +
              " is nonzero; extend the assumption set (--assume)"),
        expression(expr) {}
  std::string expression;
};

class NotStabilized : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line_, int column_)
      : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
        line(line_), column(column_) {}
  int line;
  int column;
};

class SingularJacobian : public Error {
public:
  using Error::Error;
};

class NotControllable : public Error {
public:
  using Error::Error;
};

class NotAVariation : public Error {
public:
  using Error::Error;
};

class NotASymmetryOfTheProblem : public Error {
public:
  using Error::Error;
};

class AnsatzUnderdetermined : public Error {
public:
  using Error::Error;
};

class DegenerateConstraint : public Error {
public:
  using Error::Error;
};

class TruncationOverflow : public Error {
public:
  using Error::Error;
};

class MalformedInput : public Error {
public:
  using Error::Error;
};

} // namespace diffiety
