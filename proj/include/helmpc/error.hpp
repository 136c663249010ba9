// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_ERROR_HPP
#define HELMPC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace helmpc
{

enum class ErrorKind
{
  InvalidArgument,
  InvalidCoefficient,
  DegenerateSystem,
  NotPositiveDefinite,
  NoConvergence,
  SingularSystem,
  InvalidSystem,
  InvalidPair,
  Parse,
  Config,
  Io
};

const char *ToString(ErrorKind kind);

//
// Single exception type for the library; the kind distinguishes the failure class.
//
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(ToString(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Thrown by the norm estimators when the iteration cap is reached.
class NoConvergenceError : public Error
{
public:
  NoConvergenceError(const std::string &what, double last_estimate)
    : Error(ErrorKind::NoConvergence, what), last_estimate_(last_estimate)
  {
  }

  double last_estimate() const { return last_estimate_; }

private:
  double last_estimate_;
};

// Thrown by the matrix-exchange and config readers.
class ParseError : public Error
{
public:
  ParseError(const std::string &source, long line, const std::string &what)
    : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what),
      line_(line)
  {
  }

  long line() const { return line_; }

private:
  long line_;
};

inline void Require(bool cond, ErrorKind kind, const std::string &what)
{
  if (!cond)
  {
    throw Error(kind, what);
  }
}

}  // namespace helmpc

#endif  // HELMPC_ERROR_HPP
