// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/error.hpp"

namespace helmpc
{

const char *ToString(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidArgument:
      return "invalid argument";
    case ErrorKind::InvalidCoefficient:
      return "invalid coefficient";
    case ErrorKind::DegenerateSystem:
      return "degenerate system";
    case ErrorKind::NotPositiveDefinite:
      return "not positive definite";
    case ErrorKind::NoConvergence:
      return "no convergence";
    case ErrorKind::SingularSystem:
      return "singular system";
    case ErrorKind::InvalidSystem:
      return "invalid system";
    case ErrorKind::InvalidPair:
      return "invalid pair";
    case ErrorKind::Parse:
      return "parse error";
    case ErrorKind::Config:
      return "config error";
    case ErrorKind::Io:
      return "io error";
  }
  return "error";
}

}  // namespace helmpc
