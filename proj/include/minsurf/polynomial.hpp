#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

/// Dense polynomial with complex coefficients, coeffs()[i] multiplies z^i.
/// Trailing zero coefficients are stripped on construction; the zero
/// polynomial is stored as the single coefficient 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx{0.0}} {}
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs) : Polynomial(std::vector<cplx>(coeffs)) {}

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  cplx operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : cplx{0.0}; }
  cplx leading() const noexcept { return coeffs_.back(); }

  /// Horner evaluation.
  cplx operator()(cplx z) const noexcept;

  /// Sum_i |a_i| |z|^i, the natural scale for rounding error in p(z).
  double magnitude_at(double abs_z) const noexcept;

  /// Exact derivative by coefficient shift-and-scale.
  Polynomial derivative(std::size_t order = 1) const;

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& p);

 private:
  std::vector<cplx> coeffs_;
};

struct RootSet {
  std::vector<cplx> roots;
  std::vector<bool> certified_simple;
  std::vector<double> residuals;  // |p(r)| / magnitude_at(|r|)
};

struct RootOptions {
  int max_iter = 500;
  int polish_steps = 5;
  double tol_root = 1e-12;
  double simple_tol = 1e-8;
};

inline constexpr int kMaxBinomDegree = 25;

/// f_n(z) = sum_j C(n,j)^2 z^j. Throws RangeError unless 1 <= n <= 25.
Polynomial binom_sq_coeffs(int n);

/// Legendre polynomial L_n(x) by the three-term recurrence.
cplx legendre_eval(int n, cplx x);

/// |f_n(z) - (1-z)^n L_n((1+z)/(1-z))|. Throws DomainError at z = 1.
double fn_legendre_identity_defect(int n, cplx z);

/// z(1-z) f_n'' + (1+(2n-1)z) f_n' - n^2 f_n, derivatives taken exactly.
cplx hypergeom_ode_residual(int n, cplx z);

/// Unique positive root of |a_d| x^d - sum_{i<d} |a_i| x^i; every root lies
/// in the closed disk of this radius.
double cauchy_bound(const Polynomial& p);

/// All roots by Aberth-Ehrlich simultaneous iteration started on the
/// Cauchy-bound circle, followed by Newton polishing. Throws
/// IterationFailure if any root misses tol_root.
RootSet poly_roots(const Polynomial& p, const RootOptions& opts = {});

}  // namespace minsurf
