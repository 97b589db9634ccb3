#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace curveflow {

// Base class of every failure raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- geometry ---------------------------------------------------------------

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

class DegenerateSegment : public Error {
 public:
  using Error::Error;
};

class DegeneratePoints : public Error {
 public:
  using Error::Error;
};

// --- linear solvers ----------------------------------------------------------

class ZeroDiagonal : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& msg, double residual, int iterations)
      : Error(msg), residual(residual), iterations(iterations) {}

  double residual;
  int iterations;
};

// --- time stepping ------------------------------------------------------------

// A local length became non-positive (or numerically negligible); the
// intrinsic-derivative approximations would divide by it.
class MeshCollapse : public Error {
 public:
  using Error::Error;
};

// A linear solve inside a time step failed.  `subsystem` names the system
// ("curvature", "position-x", "position-y"); `step_index` is filled in by the
// evolution loop (1-based, -1 when unknown).
class StepFailed : public Error {
 public:
  StepFailed(const std::string& msg, std::string subsystem, long step_index = -1)
      : Error(msg), subsystem(std::move(subsystem)), step_index(step_index) {}

  std::string subsystem;
  long step_index;
};

}  // namespace curveflow
