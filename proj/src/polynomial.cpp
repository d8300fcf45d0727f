#include "minsurf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

namespace minsurf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t binomial(int n, int k) {
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

}  // namespace

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0}) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(cplx{0.0});
}

cplx Polynomial::operator()(cplx z) const noexcept {
  cplx acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::magnitude_at(double abs_z) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_z + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative(std::size_t order) const {
  std::vector<cplx> c = coeffs_;
  for (std::size_t k = 0; k < order; ++k) {
    if (c.size() <= 1) return Polynomial{};
    std::vector<cplx> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    c = std::move(d);
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{0.0});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{0.0});
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& p) {
  std::vector<cplx> c = p.coeffs_;
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c));
}

Polynomial binom_sq_coeffs(int n) {
  if (n < 1 || n > kMaxBinomDegree)
    throw RangeError("binom_sq_coeffs: n must satisfy 1 <= n <= " + std::to_string(kMaxBinomDegree) +
                     ", got " + std::to_string(n));
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const std::uint64_t b = binomial(n, j);
    c[static_cast<std::size_t>(j)] = cplx{static_cast<double>(b * b)};
  }
  return Polynomial(std::move(c));
}

cplx legendre_eval(int n, cplx x) {
  if (n <= 0) return cplx{1.0};
  cplx prev{1.0};
  cplx cur = x;
  for (int k = 1; k < n; ++k) {
    const cplx next = (static_cast<double>(2 * k + 1) * x * cur - static_cast<double>(k) * prev) /
                      static_cast<double>(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double fn_legendre_identity_defect(int n, cplx z) {
  if (z == cplx{1.0}) throw DomainError("fn_legendre_identity_defect: z = 1 is a pole of the transform");
  const Polynomial f = binom_sq_coeffs(n);
  const cplx w = 1.0 - z;
  cplx wn{1.0};
  for (int i = 0; i < n; ++i) wn *= w;
  return std::abs(f(z) - wn * legendre_eval(n, (1.0 + z) / w));
}

cplx hypergeom_ode_residual(int n, cplx z) {
  const Polynomial f = binom_sq_coeffs(n);
  const Polynomial f1 = f.derivative();
  const Polynomial f2 = f.derivative(2);
  const double nn = static_cast<double>(n);
  return z * (1.0 - z) * f2(z) + (1.0 + (2.0 * nn - 1.0) * z) * f1(z) - nn * nn * f(z);
}

double cauchy_bound(const Polynomial& p) {
  const std::size_t d = p.degree();
  if (d == 0) return 0.0;
  const double lead = std::abs(p.leading());
  double hi = 0.0;
  for (std::size_t i = 0; i < d; ++i) hi = std::max(hi, std::abs(p[i]) / lead);
  if (hi == 0.0) return 0.0;
  hi += 1.0;
  // sum_{i<d} |a_i/a_d| x^(i-d) is strictly decreasing in x; bisect for where it equals 1.
  auto excess = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::abs(p[i]) / lead * std::pow(x, static_cast<double>(i) - static_cast<double>(d));
    return s - 1.0;
  };
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > kEps * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == 0.0 || excess(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

RootSet poly_roots(const Polynomial& p, const RootOptions& opts) {
  if (p.degree() < 1) throw DomainError("poly_roots: polynomial must have degree >= 1");

  RootSet out;
  // Exact zero roots are split off so the iteration sees a nonzero constant term.
  std::size_t zeros = 0;
  while (zeros < p.degree() && p[zeros] == cplx{0.0}) ++zeros;
  std::vector<cplx> rest(p.coeffs().begin() + static_cast<std::ptrdiff_t>(zeros), p.coeffs().end());
  const Polynomial q(std::move(rest));
  const Polynomial dq = q.derivative();
  const std::size_t d = q.degree();

  std::vector<cplx> z(d);
  if (d > 0) {
    const double radius = cauchy_bound(q);
    for (std::size_t k = 0; k < d; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d) + 0.4;
      z[k] = std::polar(radius, angle);
    }
  }

  auto rel_residual = [&](cplx r) {
    const double mag = q.magnitude_at(std::abs(r));
    return mag > 0.0 ? std::abs(q(r)) / mag : 0.0;
  };

  std::vector<bool> done(d, false);
  const double roundoff = 2.0 * static_cast<double>(d + 1) * kEps;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    bool all_done = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      const cplx pv = q(z[i]);
      if (std::abs(pv) <= roundoff * q.magnitude_at(std::abs(z[i]))) {
        done[i] = true;
        continue;
      }
      const cplx ratio = pv / dq(z[i]);
      cplx s{0.0};
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const cplx w = ratio / (1.0 - ratio * s);
      z[i] -= w;
      if (std::abs(w) <= 4.0 * kEps * std::abs(z[i])) done[i] = true;
      all_done = all_done && done[i];
    }
    if (all_done) break;
  }

  for (auto& r : z) {
    double res = rel_residual(r);
    for (int k = 0; k < opts.polish_steps && res > 0.0; ++k) {
      const cplx dv = dq(r);
      if (dv == cplx{0.0}) break;
      const cplx cand = r - q(r) / dv;
      const double cres = rel_residual(cand);
      if (!(cres < res)) break;
      r = cand;
      res = cres;
    }
  }

  // Real polynomials: an imaginary part at rounding level is noise, not a conjugate pair.
  const bool real_coeffs =
      std::all_of(q.coeffs().begin(), q.coeffs().end(), [](cplx v) { return v.imag() == 0.0; });
  if (real_coeffs)
    for (auto& r : z)
      if (std::abs(r.imag()) <= 8.0 * kEps * std::abs(r.real())) r = cplx{r.real(), 0.0};

  out.roots.assign(zeros, cplx{0.0});
  out.roots.insert(out.roots.end(), z.begin(), z.end());

  const Polynomial dp = p.derivative();
  double worst = 0.0;
  for (const cplx r : out.roots) {
    const double mag = p.magnitude_at(std::abs(r));
    const double res = mag > 0.0 ? std::abs(p(r)) / mag : 0.0;
    out.residuals.push_back(res);
    worst = std::max(worst, res);
    const double dscale = dp.magnitude_at(std::abs(r));
    out.certified_simple.push_back(dscale > 0.0 && std::abs(dp(r)) >= opts.simple_tol * dscale);
  }
  if (!(worst <= opts.tol_root))
    throw IterationFailure("poly_roots: residual " + std::to_string(worst) + " exceeds tolerance", out.roots, worst);
  return out;
}

}  // namespace minsurf
