#include "minsurf/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minsurf/polynomial.hpp"

namespace minsurf {

void Configuration::check_structure() const {
  if (points.size() != necksizes.size())
    throw ConfigurationError("configuration: " + std::to_string(points.size()) + " points but " +
                             std::to_string(necksizes.size()) + " necksizes");
  if (points.empty()) throw ConfigurationError("configuration: no points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(points[k].real()) || !std::isfinite(points[k].imag()))
      throw ConfigurationError("configuration: point " + std::to_string(k) + " is not finite", {k});
    if (points[k] == cplx{0.0})
      throw ConfigurationError("configuration: point " + std::to_string(k) + " is zero (annular end)", {k});
    if (!std::isfinite(necksizes[k]) || necksizes[k] == 0.0)
      throw ConfigurationError("configuration: necksize " + std::to_string(k) + " must be finite and nonzero", {k});
  }
  for (std::size_t k = 0; k < points.size(); ++k)
    for (std::size_t j = k + 1; j < points.size(); ++j)
      if (points[k] == points[j])
        throw ConfigurationError(
            "configuration: points " + std::to_string(k) + " and " + std::to_string(j) + " coincide", {k, j});
}

double Configuration::necksize_sum_defect() const noexcept {
  double s = 0.0;
  for (double a : necksizes) s += a;
  return std::abs(s);
}

bool Configuration::necksizes_balanced() const noexcept {
  double scale = 0.0;
  for (double a : necksizes) scale += std::abs(a);
  return necksize_sum_defect() <= kNecksizeSumTol * std::max(1.0, scale);
}

std::vector<cplx> balance_forces(const Configuration& c) {
  const std::size_t m = c.size();
  std::vector<cplx> f(m);
  for (std::size_t k = 0; k < m; ++k) {
    cplx s{0.0};
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) s += c.necksizes[j] / (c.points[k] - c.points[j]);
    f[k] = 2.0 * s + c.necksizes[k] / c.points[k];
  }
  return f;
}

BalanceReport balance_residuals(const Configuration& c) {
  c.check_structure();
  const std::size_t m = c.size();
  const auto& p = c.points;
  const auto& a = c.necksizes;

  BalanceReport r;
  r.residuals = balance_forces(c);
  r.jacobian = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    r.max_abs = std::max(r.max_abs, std::abs(r.residuals[k]));
    r.residue_theorem_defect += p[k] * a[k] * r.residuals[k];

    cplx diag = -a[k] / (p[k] * p[k]);
    double term_scale = std::abs(a[k] * a[k]);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      const cplx d = p[k] - p[j];
      const cplx off = 2.0 * a[j] / (d * d);
      r.jacobian(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = off;
      diag -= off;
      term_scale += 2.0 * std::abs(p[k] * a[k] * a[j] / d);
    }
    r.jacobian(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = diag;
    r.defect_scale += term_scale;
  }
  return r;
}

namespace {

double min_separation(const std::vector<cplx>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.size(); ++k) {
    best = std::min(best, std::abs(p[k]));
    for (std::size_t j = k + 1; j < p.size(); ++j) best = std::min(best, std::abs(p[k] - p[j]));
  }
  return best;
}

double diameter(const std::vector<cplx>& p) {
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    d = std::max(d, std::abs(p[k]));
    for (std::size_t j = k + 1; j < p.size(); ++j) d = std::max(d, std::abs(p[k] - p[j]));
  }
  return d;
}

struct Evaluation {
  std::vector<cplx> forces;
  double max_abs = 0.0;
  double retained_norm2 = 0.0;
};

Evaluation evaluate(const Configuration& c, std::size_t dropped) {
  Evaluation e;
  e.forces = balance_forces(c);
  for (std::size_t k = 0; k < e.forces.size(); ++k) {
    e.max_abs = std::max(e.max_abs, std::abs(e.forces[k]));
    if (k != dropped) e.retained_norm2 += std::norm(e.forces[k]);
  }
  return e;
}

}  // namespace

SolveResult solve_balance(const Configuration& init, const std::set<std::size_t>& fixed_indices,
                          const SolverOptions& opts) {
  init.check_structure();
  const std::size_t m = init.size();
  if (fixed_indices.empty()) throw ConfigurationError("solve_balance: at least one point must be fixed");
  for (std::size_t k : fixed_indices)
    if (k >= m) throw ConfigurationError("solve_balance: fixed index " + std::to_string(k) + " out of range", {k});
  if (!init.necksizes_balanced())
    throw ConfigurationError("solve_balance: necksizes do not sum to zero (defect " +
                             std::to_string(init.necksize_sum_defect()) + ")");

  const std::size_t dropped = *fixed_indices.rbegin();
  std::vector<std::size_t> free_idx, rows;
  for (std::size_t k = 0; k < m; ++k) {
    if (!fixed_indices.contains(k)) free_idx.push_back(k);
    if (k != dropped) rows.push_back(k);
  }
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nf = static_cast<Eigen::Index>(free_idx.size());

  SolveResult out;
  out.config = init;
  Configuration& cur = out.config;
  Evaluation ev = evaluate(cur, dropped);
  out.residual_history.push_back(ev.max_abs);

  auto newton_step = [&](const Evaluation& e) {
    const BalanceReport rep = balance_residuals(cur);
    Eigen::MatrixXcd J(nr, nf);
    Eigen::VectorXcd rhs(nr);
    for (Eigen::Index r = 0; r < nr; ++r) {
      rhs(r) = -e.forces[rows[static_cast<std::size_t>(r)]];
      for (Eigen::Index f = 0; f < nf; ++f)
        J(r, f) = rep.jacobian(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]),
                               static_cast<Eigen::Index>(free_idx[static_cast<std::size_t>(f)]));
    }
    // Rank is judged against the size of the terms that make up each entry,
    // so a Jacobian that vanishes by cancellation is caught.
    double scale = 0.0;
    for (std::size_t k : rows) {
      double row = std::abs(cur.necksizes[k] / (cur.points[k] * cur.points[k]));
      for (std::size_t j = 0; j < m; ++j)
        if (j != k) row += 2.0 * std::abs(cur.necksizes[j] / std::norm(cur.points[k] - cur.points[j]));
      scale = std::max(scale, row);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(J);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < std::min(nr, nf); ++i)
      if (std::abs(qr.matrixQR()(i, i)) > 1e-12 * scale) ++rank;
    if (rank < nf)
      throw RankError("solve_balance: restricted Jacobian has rank " + std::to_string(rank) + " < " +
                          std::to_string(nf),
                      cur.points);
    const Eigen::VectorXcd delta = qr.solve(rhs);
    // Slope of ||F||^2 along delta, for the Armijo test.
    const double slope = -2.0 * (rhs.adjoint() * (J * delta))(0).real();
    return std::pair{delta, slope};
  };

  auto trial = [&](const Eigen::VectorXcd& delta, double t) {
    Configuration cand = cur;
    for (Eigen::Index f = 0; f < nf; ++f) cand.points[free_idx[static_cast<std::size_t>(f)]] += t * delta(f);
    return cand;
  };

  if (free_idx.empty()) {
    out.final_residual = ev.max_abs;
    if (ev.max_abs > opts.tol)
      throw IterationFailure("solve_balance: every point fixed and configuration unbalanced", cur.points, ev.max_abs,
                             out.residual_history);
    return out;
  }

  while (ev.max_abs > opts.tol) {
    if (out.iterations >= opts.max_iter)
      throw IterationFailure("solve_balance: no convergence in " + std::to_string(opts.max_iter) + " iterations",
                             cur.points, ev.max_abs, out.residual_history);
    const auto [delta, slope] = newton_step(ev);
    const double guard = opts.collision_fraction * diameter(cur.points);
    double t = 1.0;
    bool accepted = false;
    while (t >= opts.min_step) {
      Configuration cand = trial(delta, t);
      if (min_separation(cand.points) > guard) {
        Evaluation ce = evaluate(cand, dropped);
        if (std::isfinite(ce.retained_norm2) && ce.retained_norm2 <= ev.retained_norm2 + 1e-4 * t * slope) {
          cur = std::move(cand);
          ev = std::move(ce);
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted)
      throw IterationFailure("solve_balance: line search stalled", cur.points, ev.max_abs, out.residual_history);
    ++out.iterations;
    out.residual_history.push_back(ev.max_abs);
  }

  // Quadratic convergence leaves a few digits on the table at the moment tol is met.
  for (int k = 0; k < opts.polish_steps && ev.retained_norm2 > 0.0; ++k) {
    const auto [delta, slope] = newton_step(ev);
    Configuration cand = trial(delta, 1.0);
    Evaluation ce = evaluate(cand, dropped);
    if (!(ce.retained_norm2 < 0.25 * ev.retained_norm2) || ce.max_abs > ev.max_abs) break;
    cur = std::move(cand);
    ev = std::move(ce);
    ++out.iterations;
    out.residual_history.push_back(ev.max_abs);
  }

  out.final_residual = ev.max_abs;
  return out;
}

Configuration legendre_config(int n) {
  const RootSet rs = poly_roots(binom_sq_coeffs(n));
  Configuration c;
  c.points = rs.roots;
  std::sort(c.points.begin(), c.points.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  c.necksizes.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  c.points.push_back(cplx{1.0});
  c.necksizes.push_back(-1.0);
  c.label = "legendre n=" + std::to_string(n);
  const double worst = balance_residuals(c).max_abs;
  if (!(worst <= 1e-9))
    throw IterationFailure("legendre_config: roots of f_n not balanced to 1e-9", c.points, worst);
  return c;
}

double root_set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  double worst = 0.0;
  for (std::size_t round = 0; round < a.size(); ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace minsurf
