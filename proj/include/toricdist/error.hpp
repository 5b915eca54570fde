#pragma once

#include <stdexcept>
#include <string>

namespace toricdist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent polytope / weight input.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NotDelzant : public Error {
 public:
  NotDelzant(std::string vertex, long long det, const std::string& what)
      : Error(what), vertex_(std::move(vertex)), det_(det) {}
  const std::string& vertex() const noexcept { return vertex_; }
  long long det() const noexcept { return det_; }

 private:
  std::string vertex_;
  long long det_;
};

class PointOutsidePolytope : public Error {
 public:
  using Error::Error;
};

/// The moment map equation has no finite solution at boundary points.
class PointNotInterior : public Error {
 public:
  using Error::Error;
};

class VertexNotOnFace : public Error {
 public:
  using Error::Error;
};

class NotAVertex : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or quadrature refinement did not reach its tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class MarginTooSmall : public Error {
 public:
  using Error::Error;
};

class RegionTouchesBoundary : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace toricdist
