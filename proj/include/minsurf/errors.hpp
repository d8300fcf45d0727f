#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace minsurf {

using cplx = std::complex<double>;

/// Argument outside a supported range (e.g. polynomial degree cap).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Evaluation requested at a point where the expression is undefined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at (or numerically on top of) a pole.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, std::size_t index) : DomainError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A configuration violates a structural invariant. `indices` names the
/// offending points (one index for a zero point, two for a collision).
class ConfigurationError : public std::invalid_argument {
 public:
  ConfigurationError(const std::string& what, std::vector<std::size_t> indices = {})
      : std::invalid_argument(what), indices_(std::move(indices)) {}
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

/// Iterative method gave up. Carries the best iterate seen and its residual.
class IterationFailure : public std::runtime_error {
 public:
  IterationFailure(const std::string& what, std::vector<cplx> best, double residual,
                   std::vector<double> history = {})
      : std::runtime_error(what),
        best_(std::move(best)),
        residual_(residual),
        history_(std::move(history)) {}
  const std::vector<cplx>& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<cplx> best_;
  double residual_;
  std::vector<double> history_;
};

/// Restricted Newton system is rank deficient.
class RankError : public std::runtime_error {
 public:
  RankError(const std::string& what, std::vector<cplx> iterate)
      : std::runtime_error(what), iterate_(std::move(iterate)) {}
  const std::vector<cplx>& iterate() const noexcept { return iterate_; }

 private:
  std::vector<cplx> iterate_;
};

/// Integration contour or path comes too close to a singularity.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate_change)
      : std::runtime_error(what), estimate_change_(estimate_change) {}
  double estimate_change() const noexcept { return estimate_change_; }

 private:
  double estimate_change_;
};

}  // namespace minsurf
