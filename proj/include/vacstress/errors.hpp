#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace vacstress {

/// Input outside the domain of an operation (r <= 0, angle outside a wedge, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation requested exactly at a kernel singularity.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative procedure (quadrature, extrapolation) missed its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what + " (achieved " + format(achieved) + ", requested " +
                           format(requested) + ")"),
        achieved_(achieved),
        requested_(requested) {}

  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
  }

  double achieved_;
  double requested_;
};

}  // namespace vacstress
