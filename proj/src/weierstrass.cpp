#include "minsurf/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "minsurf/polynomial.hpp"

namespace minsurf {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kMultiplicityTol = 1e-8;

}  // namespace

WeierstrassData::WeierstrassData(const Configuration& c) : config_(&c) { c.check_structure(); }

cplx WeierstrassData::height(cplx z) const {
  const auto& p = config_->points;
  const auto& a = config_->necksizes;
  cplx h{0.0};
  for (std::size_t j = 0; j < p.size(); ++j) {
    const cplx d = z - p[j];
    if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(p[j])))
      throw PoleError("evaluation at pole p_" + std::to_string(j), j);
    h += a[j] / d;
  }
  return h;
}

CVec3 WeierstrassData::integrand(cplx z) const {
  const cplx h = height(z);
  const cplx gh = z * h * h;
  const cplx inv_z = 1.0 / z;
  return {0.5 * (inv_z - gh), 0.5 * kI * (inv_z + gh), h};
}

double WeierstrassData::singularity_distance(cplx z) const noexcept {
  double d = std::abs(z);
  for (const cplx p : config_->points) d = std::min(d, std::abs(z - p));
  return d;
}

std::vector<cplx> WeierstrassData::singularities() const {
  std::vector<cplx> s{cplx{0.0}};
  s.insert(s.end(), config_->points.begin(), config_->points.end());
  return s;
}

cplx gauss_map(const Configuration& c, cplx z) { return WeierstrassData(c).gauss(z); }

cplx gdh_residue(const Configuration& c, std::size_t k) {
  c.check_structure();
  if (k >= c.size()) throw std::out_of_range("gdh_residue: index " + std::to_string(k) + " out of range");
  const cplx pk = c.points[k];
  cplx s{0.0};
  for (std::size_t j = 0; j < c.size(); ++j)
    if (j != k) s += c.necksizes[j] / (pk - c.points[j]);
  return pk * c.necksizes[k] * (2.0 * s + c.necksizes[k] / pk);
}

template <std::size_t N>
std::array<cplx, N> circle_integral(const std::function<std::array<cplx, N>(cplx)>& f, cplx center, double radius,
                                    const std::vector<cplx>& singular_points, const ContourOptions& opts,
                                    int* nodes_used) {
  if (!(radius > 0.0)) throw GeometryError("circle_integral: radius must be positive");
  for (const cplx s : singular_points) {
    const double gap = std::abs(std::abs(s - center) - radius);
    if (gap < opts.clearance * radius)
      throw GeometryError("circle_integral: contour passes within " + std::to_string(gap) + " of singularity (" +
                          std::to_string(s.real()) + ", " + std::to_string(s.imag()) + ")");
  }

  // sum over nodes k = offset, offset + stride, ... of f(z) dz/dtheta
  auto partial = [&](int n, int offset, int stride) {
    std::array<cplx, N> acc{};
    for (int k = offset; k < n; k += stride) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      const cplx e = std::polar(1.0, theta);
      const cplx dz = kI * radius * e;
      const auto v = f(center + radius * e);
      for (std::size_t i = 0; i < N; ++i) acc[i] += v[i] * dz;
    }
    return acc;
  };

  int n = opts.initial_nodes;
  auto raw = partial(n, 0, 1);
  std::array<cplx, N> prev{};
  for (std::size_t i = 0; i < N; ++i) prev[i] = raw[i] * (2.0 * std::numbers::pi / n);

  double change = std::numeric_limits<double>::infinity();
  while (n < opts.max_nodes) {
    const auto odd = partial(2 * n, 1, 2);
    n *= 2;
    std::array<cplx, N> next{};
    change = 0.0;
    double mag = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      raw[i] += odd[i];
      next[i] = raw[i] * (2.0 * std::numbers::pi / n);
      change = std::max(change, std::abs(next[i] - prev[i]));
      mag = std::max(mag, std::abs(next[i]));
    }
    prev = next;
    if (change < opts.tol * mag) {
      if (nodes_used) *nodes_used = n;
      return next;
    }
  }
  throw QuadratureError("circle_integral: no convergence at " + std::to_string(n) + " nodes", change);
}

template std::array<cplx, 1> circle_integral<1>(const std::function<std::array<cplx, 1>(cplx)>&, cplx, double,
                                                const std::vector<cplx>&, const ContourOptions&, int*);
template std::array<cplx, 3> circle_integral<3>(const std::function<std::array<cplx, 3>(cplx)>&, cplx, double,
                                                const std::vector<cplx>&, const ContourOptions&, int*);

PeriodVector contour_period(const Configuration& c, cplx center, double radius, const ContourOptions& opts) {
  const WeierstrassData w(c);
  PeriodVector pv;
  pv.center = center;
  pv.radius = radius;
  const auto total = circle_integral<3>([&](cplx z) { return w.integrand(z); }, center, radius, w.singularities(),
                                        opts, &pv.nodes);
  for (std::size_t i = 0; i < 3; ++i) pv.coords[i] = total[i].real();
  return pv;
}

cplx contour_gdh_residue(const Configuration& c, cplx center, double radius, const ContourOptions& opts) {
  const WeierstrassData w(c);
  const auto total = circle_integral<1>(
      [&](cplx z) {
        const cplx h = w.height(z);
        return std::array<cplx, 1>{z * h * h};
      },
      center, radius, w.singularities(), opts);
  return total[0] / (2.0 * std::numbers::pi * kI);
}

double default_radius(const Configuration& c, std::size_t k) {
  double d = std::numeric_limits<double>::infinity();
  if (k >= c.size()) {
    for (const cplx p : c.points) d = std::min(d, std::abs(p));
  } else {
    d = std::abs(c.points[k]);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (j != k) d = std::min(d, std::abs(c.points[k] - c.points[j]));
  }
  return 0.5 * d;
}

bool ConditionsReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
}

namespace {

// Vanishing order of P at r: first d with |P^(d)(r)| above tolerance relative
// to the coefficient-magnitude scale of P^(d) at |r|.
int vanishing_order(const Polynomial& p, cplx r) {
  Polynomial d = p;
  for (std::size_t order = 0; order <= p.degree(); ++order) {
    const double scale = d.magnitude_at(std::abs(r));
    if (scale > 0.0 && std::abs(d(r)) > kMultiplicityTol * scale) return static_cast<int>(order);
    d = d.derivative();
  }
  return static_cast<int>(p.degree());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

ConditionsReport verify_conditions(const Configuration& c) {
  c.check_structure();
  const std::size_t m = c.size();
  const auto& p = c.points;
  const auto& a = c.necksizes;

  // h(z) = N(z) / D(z), G(z) = z N(z) / D(z).
  Polynomial denom{cplx{1.0}};
  for (const cplx pj : p) denom = denom * Polynomial{-pj, cplx{1.0}};
  Polynomial numer;
  for (std::size_t j = 0; j < m; ++j) {
    Polynomial term{cplx{a[j]}};
    for (std::size_t i = 0; i < m; ++i)
      if (i != j) term = term * Polynomial{-p[i], cplx{1.0}};
    numer = numer + term;
  }
  // Drop leading coefficients that are rounding noise (sum alpha ~ 0).
  std::vector<cplx> nc(numer.coeffs().begin(), numer.coeffs().end());
  double nmax = 0.0;
  for (const cplx v : nc) nmax = std::max(nmax, std::abs(v));
  while (nc.size() > 1 && std::abs(nc.back()) <= kMultiplicityTol * nmax) nc.pop_back();
  const Polynomial n_eff(nc);
  const Polynomial g_numer = Polynomial{cplx{0.0}, cplx{1.0}} * n_eff;

  double point_scale = 0.0;
  for (const cplx pj : p) point_scale = std::max(point_scale, std::abs(pj));

  ConditionsReport rep;

  {
    ConditionCheck chk{"shared zeros of G and dh", true, 0.0, ""};
    int count = 0;
    if (n_eff.degree() >= 1) {
      try {
        const RootSet rs = poly_roots(n_eff, RootOptions{.tol_root = 1e-10});
        const WeierstrassData w(c);
        // A k-fold zero comes back as k roots spread by ~eps^(1/k); their
        // centroid is far more accurate, so orders are measured there.
        std::vector<std::vector<cplx>> clusters;
        for (const cplx r : rs.roots) {
          bool placed = false;
          for (auto& cl : clusters)
            if (std::abs(cl.front() - r) <= 1e-4 * (1.0 + std::abs(r))) {
              cl.push_back(r);
              placed = true;
              break;
            }
          if (!placed) clusters.push_back({r});
        }
        for (const auto& cl : clusters) {
          cplx r{0.0};
          for (const cplx v : cl) r += v;
          r /= static_cast<double>(cl.size());
          if (std::abs(r) <= kMultiplicityTol * point_scale) continue;
          count += static_cast<int>(cl.size());
          const int oh = vanishing_order(n_eff, r);
          const int og = vanishing_order(g_numer, r);
          if (oh != og || oh != static_cast<int>(cl.size())) {
            chk.passed = false;
            chk.detail += "multiplicity mismatch at (" + fmt(r.real()) + ", " + fmt(r.imag()) + "); ";
          }
          // |G(r)| relative to the size of its terms.
          double terms = 0.0;
          for (std::size_t j = 0; j < m; ++j) terms += std::abs(a[j] / (r - p[j]));
          const double rel = std::abs(w.height(r)) / terms;
          chk.defect = std::max(chk.defect, rel);
        }
      } catch (const IterationFailure& e) {
        chk.passed = false;
        chk.defect = e.residual();
        chk.detail = "root finder failed on the numerator of dh";
      }
    }
    if (chk.defect > kMultiplicityTol) chk.passed = false;
    if (chk.detail.empty()) chk.detail = std::to_string(count) + " zero(s) away from 0";
    rep.checks.push_back(chk);
  }

  {
    int zero_order = 0;
    while (static_cast<std::size_t>(zero_order) < nc.size() && std::abs(nc[zero_order]) <= kMultiplicityTol * nmax)
      ++zero_order;
    rep.order_dh_at_zero = zero_order;
    rep.order_g_at_zero = zero_order + 1;
    const int diff = rep.order_g_at_zero - rep.order_dh_at_zero;
    rep.checks.push_back({"end orders at 0", rep.order_g_at_zero >= 1 && diff == 1, std::abs(diff - 1.0),
                          "ord G = " + std::to_string(rep.order_g_at_zero) +
                              ", ord dh = " + std::to_string(rep.order_dh_at_zero)});

    const int deg_n = static_cast<int>(n_eff.degree());
    rep.order_g_at_infinity = static_cast<int>(m) - 1 - deg_n;
    rep.order_dh_at_infinity = static_cast<int>(m) - 2 - deg_n;
    rep.checks.push_back({"end orders at infinity", rep.order_g_at_infinity >= 1,
                          rep.order_g_at_infinity >= 1 ? 0.0 : 1.0,
                          "ord G = " + std::to_string(rep.order_g_at_infinity) +
                              ", ord dh = " + std::to_string(rep.order_dh_at_infinity)});
  }

  {
    ConditionCheck chk{"simple poles with residue ratio p_k", true, 0.0, ""};
    const Polynomial ddenom = denom.derivative();
    for (std::size_t k = 0; k < m; ++k) {
      const cplx dd = ddenom(p[k]);
      const cplx nv = numer(p[k]);
      if (dd == cplx{0.0} || nv == cplx{0.0}) {
        chk.passed = false;
        chk.detail += "pole " + std::to_string(k) + " is not simple; ";
        continue;
      }
      const cplx res_h = nv / dd;
      const cplx res_g = p[k] * nv / dd;
      chk.defect = std::max({chk.defect, std::abs(res_h - a[k]) / std::abs(a[k]),
                             std::abs(res_g / res_h - p[k]) / std::abs(p[k])});
    }
    if (chk.defect > kMultiplicityTol) chk.passed = false;
    if (chk.detail.empty()) chk.detail = std::to_string(m) + " simple pole(s)";
    rep.checks.push_back(chk);
  }

  {
    const double defect = c.necksize_sum_defect();
    rep.checks.push_back({"necksizes sum to zero", c.necksizes_balanced(), defect, "|sum alpha| = " + fmt(defect)});
  }
  return rep;
}

}  // namespace minsurf
