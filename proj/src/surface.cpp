#include "minsurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>

#include "minsurf/polynomial.hpp"

namespace minsurf {

namespace {

struct GaussRule {
  std::array<double, 10> nodes{};
  std::array<double, 10> weights{};
};

// Nodes are the zeros of L_10 on [-1, 1], found by Newton from Chebyshev guesses.
GaussRule make_rule() {
  constexpr int n = 10;
  GaussRule rule;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_eval(n, x).real();
      const double pm1 = legendre_eval(n - 1, x).real();
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = legendre_eval(n, x).real();
    const double pm1 = legendre_eval(n - 1, x).real();
    dp = n * (x * p - pm1) / (x * x - 1.0);
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

double segment_distance(cplx a, cplx b, cplx p) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(a + t * ab - p);
}

CVec3 panel(const WeierstrassData& w, cplx a, cplx b) {
  const GaussRule& r = rule();
  const cplx mid = 0.5 * (a + b);
  const cplx half = 0.5 * (b - a);
  CVec3 acc{};
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    const CVec3 v = w.integrand(mid + r.nodes[k] * half);
    for (std::size_t i = 0; i < 3; ++i) acc[i] += r.weights[k] * v[i];
  }
  for (auto& v : acc) v *= half;
  return acc;
}

double max_diff(const CVec3& x, const CVec3& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

CVec3 refine(const WeierstrassData& w, cplx a, cplx b, const CVec3& whole, double tol, int depth,
             const PathOptions& opts) {
  const cplx m = 0.5 * (a + b);
  const CVec3 left = panel(w, a, m);
  const CVec3 right = panel(w, m, b);
  CVec3 both{};
  double mag = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    both[i] = left[i] + right[i];
    mag = std::max(mag, std::abs(both[i]));
  }
  const double change = max_diff(both, whole);
  if (change <= std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * mag)) return both;
  if (depth >= opts.max_depth)
    throw QuadratureError("integrate_X: bisection depth exhausted near (" + std::to_string(m.real()) + ", " +
                              std::to_string(m.imag()) + ")",
                          change);
  const CVec3 l = refine(w, a, m, left, tol / std::numbers::sqrt2, depth + 1, opts);
  const CVec3 r = refine(w, m, b, right, tol / std::numbers::sqrt2, depth + 1, opts);
  return {l[0] + r[0], l[1] + r[1], l[2] + r[2]};
}

CVec3 integrate_segment(const WeierstrassData& w, cplx a, cplx b, double tol, const PathOptions& opts) {
  if (a == b) return {};
  for (const cplx s : w.singularities()) {
    const double d = segment_distance(a, b, s);
    if (d < opts.clearance)
      throw GeometryError("integrate_X: segment passes within " + std::to_string(d) + " of singularity (" +
                          std::to_string(s.real()) + ", " + std::to_string(s.imag()) + ")");
  }
  return refine(w, a, b, panel(w, a, b), tol, 0, opts);
}

Vec3 real_part(const CVec3& v) { return {v[0].real(), v[1].real(), v[2].real()}; }

}  // namespace

CVec3 integrate_phi(const Configuration& c, cplx z0, cplx z, std::span<const cplx> via, const PathOptions& opts) {
  const WeierstrassData w(c);
  std::vector<cplx> nodes{z0};
  nodes.insert(nodes.end(), via.begin(), via.end());
  nodes.push_back(z);
  const double tol = opts.tol / static_cast<double>(nodes.size() - 1);
  CVec3 acc{};
  for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
    const CVec3 part = integrate_segment(w, nodes[s], nodes[s + 1], tol, opts);
    for (std::size_t i = 0; i < 3; ++i) acc[i] += part[i];
  }
  return acc;
}

Vec3 integrate_X(const Configuration& c, cplx z0, cplx z, std::span<const cplx> via, const PathOptions& opts) {
  return real_part(integrate_phi(c, z0, z, via, opts));
}

GridSpec default_grid(const Configuration& c) {
  c.check_structure();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const cplx p : c.points) {
    lo = std::min(lo, std::abs(p));
    hi = std::max(hi, std::abs(p));
  }
  GridSpec g;
  g.r_min = 0.25 * lo;
  g.r_max = 4.0 * hi;
  return g;
}

double SurfaceMesh::seam_defect() const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (const double s : {1.0, -1.0}) {
    const double d = std::max({std::abs(seam_offset[0]), std::abs(seam_offset[1] - s * std::numbers::pi),
                               std::abs(seam_offset[2])});
    best = std::min(best, d);
  }
  return best;
}

double SurfaceMesh::max_puncture_loop_defect() const noexcept {
  double worst = 0.0;
  for (const auto& loop : puncture_loops)
    if (loop.interior)
      for (const double v : loop.closure) worst = std::max(worst, std::abs(v));
  return worst;
}

namespace {

struct Edge {
  int a = 0, b = 0;  // flat grid indices
};

std::string edge_name(int n_cols, const Edge& e) {
  return "grid edge (" + std::to_string(e.a / n_cols) + "," + std::to_string(e.a % n_cols) + ")-(" +
         std::to_string(e.b / n_cols) + "," + std::to_string(e.b % n_cols) + ")";
}

}  // namespace

SurfaceMesh build_mesh(const Configuration& c, const GridSpec& g, const PathOptions& opts) {
  const WeierstrassData w(c);
  if (!(g.r_min > 0.0) || !(g.r_min < g.r_max)) throw GeometryError("build_mesh: need 0 < r_min < r_max");
  if (g.n_r < 2 || g.n_theta < 3) throw GeometryError("build_mesh: need n_r >= 2 and n_theta >= 3");

  const std::size_t m = c.size();
  std::vector<double> cut(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (g.puncture_cut > 0.0) {
      cut[k] = g.puncture_cut;
    } else {
      double d = std::abs(c.points[k]);
      for (std::size_t j = 0; j < m; ++j)
        if (j != k) d = std::min(d, std::abs(c.points[k] - c.points[j]));
      cut[k] = 0.1 * d;
    }
  }

  SurfaceMesh mesh;
  mesh.n_r = g.n_r;
  mesh.n_cols = g.n_theta + 1;
  mesh.balance_max_abs = balance_residuals(c).max_abs;
  if (mesh.balance_max_abs > 1e-8)
    mesh.warnings.push_back("configuration is unbalanced (max |F_k| = " + std::to_string(mesh.balance_max_abs) +
                            "); periods will not close");

  const int n_cols = mesh.n_cols;
  const int total = g.n_r * n_cols;
  const double dtheta = 2.0 * std::numbers::pi / g.n_theta;
  std::vector<double> radii(static_cast<std::size_t>(g.n_r));
  for (int i = 0; i < g.n_r; ++i)
    radii[static_cast<std::size_t>(i)] = g.r_min * std::pow(g.r_max / g.r_min, static_cast<double>(i) / (g.n_r - 1));
  auto zgrid = [&](int flat) {
    const int i = flat / n_cols, j = flat % n_cols;
    return std::polar(radii[static_cast<std::size_t>(i)], j * dtheta);
  };

  auto in_cut = [&](cplx z) {
    for (std::size_t k = 0; k < m; ++k)
      if (std::abs(z - c.points[k]) < cut[k]) return true;
    return false;
  };
  auto segment_blocked = [&](cplx a, cplx b) {
    for (std::size_t k = 0; k < m; ++k)
      if (segment_distance(a, b, c.points[k]) < cut[k]) return true;
    return false;
  };

  std::vector<bool> alive(static_cast<std::size_t>(total));
  for (int v = 0; v < total; ++v) alive[static_cast<std::size_t>(v)] = !in_cut(zgrid(v));

  // Base point and tree root.
  cplx z0;
  if (g.base_point) {
    z0 = *g.base_point;
    const double r0 = std::abs(z0);
    if (!(r0 > g.r_min && r0 < g.r_max) || in_cut(z0))
      throw GeometryError("build_mesh: base point must lie inside the annulus and outside every cut disk");
  } else {
    const int mid = g.n_r / 2;
    double best = -1.0;
    for (int j = 0; j < g.n_theta; ++j) {
      const int v = mid * n_cols + j;
      if (!alive[static_cast<std::size_t>(v)]) continue;
      const double d = w.singularity_distance(zgrid(v));
      if (d > best) {
        best = d;
        z0 = zgrid(v);
      }
    }
    if (best < 0.0) throw GeometryError("build_mesh: no admissible base point on the middle row");
  }
  mesh.base_point = z0;

  int root = -1;
  double root_dist = std::numeric_limits<double>::infinity();
  for (int v = 0; v < total; ++v) {
    if (!alive[static_cast<std::size_t>(v)] || segment_blocked(z0, zgrid(v))) continue;
    const double d = std::abs(zgrid(v) - z0);
    if (d < root_dist) {
      root_dist = d;
      root = v;
    }
  }
  if (root < 0) throw GeometryError("build_mesh: no grid vertex reachable from the base point");

  auto edge_integral = [&](const Edge& e) {
    try {
      return integrate_X(c, zgrid(e.a), zgrid(e.b), {}, opts);
    } catch (const GeometryError& ex) {
      throw GeometryError(edge_name(n_cols, e) + ": " + ex.what());
    } catch (const QuadratureError& ex) {
      throw QuadratureError(edge_name(n_cols, e) + ": " + ex.what(), ex.estimate_change());
    }
  };

  auto neighbours = [&](int v) {
    const int i = v / n_cols, j = v % n_cols;
    std::vector<int> out;
    if (j + 1 < n_cols) out.push_back(v + 1);
    if (j > 0) out.push_back(v - 1);
    if (i + 1 < g.n_r) out.push_back(v + n_cols);
    if (i > 0) out.push_back(v - n_cols);
    std::erase_if(out, [&](int u) {
      return !alive[static_cast<std::size_t>(u)] || segment_blocked(zgrid(v), zgrid(u));
    });
    return out;
  };

  std::vector<Vec3> X(static_cast<std::size_t>(total));
  std::vector<bool> reached(static_cast<std::size_t>(total), false);
  X[static_cast<std::size_t>(root)] = integrate_X(c, z0, zgrid(root), {}, opts);
  reached[static_cast<std::size_t>(root)] = true;
  std::deque<int> queue{root};
  std::vector<Edge> tree_edges;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const int u : neighbours(v)) {
      if (reached[static_cast<std::size_t>(u)]) continue;
      const Vec3 d = edge_integral({v, u});
      for (std::size_t i = 0; i < 3; ++i) X[static_cast<std::size_t>(u)][i] = X[static_cast<std::size_t>(v)][i] + d[i];
      reached[static_cast<std::size_t>(u)] = true;
      tree_edges.push_back({v, u});
      queue.push_back(u);
    }
  }

  // Closure over non-tree edges (each undirected edge visited once, from its lower index).
  std::vector<std::vector<int>> tree_adj(static_cast<std::size_t>(total));
  for (const Edge& e : tree_edges) {
    tree_adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    tree_adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  for (int v = 0; v < total; ++v) {
    if (!reached[static_cast<std::size_t>(v)]) continue;
    for (const int u : neighbours(v)) {
      if (u < v || !reached[static_cast<std::size_t>(u)]) continue;
      const auto& adj = tree_adj[static_cast<std::size_t>(v)];
      if (std::find(adj.begin(), adj.end(), u) != adj.end()) continue;
      const Vec3 d = edge_integral({v, u});
      for (std::size_t i = 0; i < 3; ++i)
        mesh.edge_closure_defect =
            std::max(mesh.edge_closure_defect,
                     std::abs(X[static_cast<std::size_t>(v)][i] + d[i] - X[static_cast<std::size_t>(u)][i]));
    }
  }

  // Seam.
  std::vector<Vec3> offsets;
  for (int i = 0; i < g.n_r; ++i) {
    const int a = i * n_cols, b = i * n_cols + g.n_theta;
    if (!reached[static_cast<std::size_t>(a)] || !reached[static_cast<std::size_t>(b)]) continue;
    Vec3 d;
    for (std::size_t k = 0; k < 3; ++k) d[k] = X[static_cast<std::size_t>(b)][k] - X[static_cast<std::size_t>(a)][k];
    offsets.push_back(d);
  }
  mesh.seam_rows = static_cast<int>(offsets.size());
  if (!offsets.empty()) {
    for (const Vec3& d : offsets)
      for (std::size_t k = 0; k < 3; ++k) mesh.seam_offset[k] += d[k] / static_cast<double>(offsets.size());
    for (const Vec3& d : offsets)
      for (std::size_t k = 0; k < 3; ++k)
        mesh.seam_spread = std::max(mesh.seam_spread, std::abs(d[k] - mesh.seam_offset[k]));
  } else {
    mesh.warnings.push_back("no grid row survives at both ends of the seam");
  }

  // Kept vertices, row-major.
  mesh.vertex_index.assign(static_cast<std::size_t>(total), -1);
  for (int v = 0; v < total; ++v) {
    if (!reached[static_cast<std::size_t>(v)]) continue;
    mesh.vertex_index[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(mesh.vertices.size());
    mesh.vertices.push_back(X[static_cast<std::size_t>(v)]);
    mesh.parameters.push_back(zgrid(v));
  }

  for (int i = 0; i + 1 < g.n_r; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const int v00 = i * n_cols + j, v10 = v00 + n_cols, v11 = v10 + 1, v01 = v00 + 1;
      const std::array<int, 4> corners{v00, v10, v11, v01};
      if (std::any_of(corners.begin(), corners.end(), [&](int v) { return !reached[static_cast<std::size_t>(v)]; }))
        continue;
      bool hit = false;
      for (std::size_t k = 0; k < m && !hit; ++k) {
        const cplx p = c.points[k];
        double arg = std::arg(p);
        if (arg < 0.0) arg += 2.0 * std::numbers::pi;
        const double rp = std::abs(p);
        const bool inside = rp >= radii[static_cast<std::size_t>(i)] && rp <= radii[static_cast<std::size_t>(i + 1)] &&
                            arg >= j * dtheta && arg <= (j + 1) * dtheta;
        hit = inside;
        for (std::size_t e = 0; e < 4 && !hit; ++e)
          hit = segment_distance(zgrid(corners[e]), zgrid(corners[(e + 1) % 4]), p) < cut[k];
      }
      if (hit) continue;
      std::array<std::size_t, 4> f;
      for (std::size_t e = 0; e < 4; ++e) f[e] = static_cast<std::size_t>(mesh.vertex_index[static_cast<std::size_t>(corners[e])]);
      mesh.faces.push_back(f);
    }
  }

  // Grid-box loops around each puncture, walked counterclockwise in (log r, theta).
  for (std::size_t k = 0; k < m; ++k) {
    PunctureLoop loop;
    loop.index = k;
    const cplx p = c.points[k];
    const double rp = std::abs(p);
    double arg = std::arg(p);
    if (arg < 0.0) arg += 2.0 * std::numbers::pi;
    int i_lo = -1, i_hi = g.n_r;
    for (int i = 0; i < g.n_r; ++i) {
      if (radii[static_cast<std::size_t>(i)] < rp - cut[k]) i_lo = i;
      if (radii[static_cast<std::size_t>(i)] > rp + cut[k] && i_hi == g.n_r) i_hi = i;
    }
    --i_lo;
    ++i_hi;
    const double half = std::asin(std::min(1.0, cut[k] / rp));
    const int j_lo = static_cast<int>(std::floor((arg - half) / dtheta)) - 1;
    const int j_hi = static_cast<int>(std::ceil((arg + half) / dtheta)) + 1;
    if (i_lo < 0 || i_hi >= g.n_r || j_hi - j_lo >= g.n_theta) {
      mesh.puncture_loops.push_back(loop);
      continue;
    }
    auto at = [&](int i, int j) {
      return std::polar(radii[static_cast<std::size_t>(i)], static_cast<double>(j) * dtheta);
    };
    std::vector<cplx> ring;
    for (int i = i_lo; i < i_hi; ++i) ring.push_back(at(i, j_lo));
    for (int j = j_lo; j < j_hi; ++j) ring.push_back(at(i_hi, j));
    for (int i = i_hi; i > i_lo; --i) ring.push_back(at(i, j_hi));
    for (int j = j_hi; j > j_lo; --j) ring.push_back(at(i_lo, j));
    try {
      loop.closure = integrate_X(c, ring.front(), ring.front(), std::span<const cplx>(ring).subspan(1), opts);
      loop.interior = true;
    } catch (const GeometryError&) {
      loop.interior = false;
    }
    mesh.puncture_loops.push_back(loop);
  }
  return mesh;
}

std::size_t export_obj(const SurfaceMesh& mesh, std::ostream& sink) {
  std::size_t bytes = 0;
  char buf[128];
  auto emit = [&](int len) {
    sink.write(buf, len);
    bytes += static_cast<std::size_t>(len);
  };
  for (const Vec3& v : mesh.vertices) emit(std::snprintf(buf, sizeof buf, "v %.12g %.12g %.12g\n", v[0], v[1], v[2]));
  for (const auto& f : mesh.faces)
    emit(std::snprintf(buf, sizeof buf, "f %zu %zu %zu %zu\n", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1));
  sink.flush();
  if (!sink) throw std::ios_base::failure("export_obj: write to sink failed");
  return bytes;
}

}  // namespace minsurf
