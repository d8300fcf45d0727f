#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "minsurf/weierstrass.hpp"

namespace minsurf {

struct PathOptions {
  double tol = 1e-9;         // per coordinate, on the whole path
  double clearance = 1e-8;   // minimum distance from the path to 0 and every p_k
  int max_depth = 48;
};

/// X(z) - X(z0) = Re of the integral of the Weierstrass integrand along the
/// polyline z0 -> via... -> z, by adaptively bisected 10-point Gauss-Legendre
/// panels. Throws GeometryError if a segment violates the clearance and
/// QuadratureError if bisection runs out of depth.
Vec3 integrate_X(const Configuration& c, cplx z0, cplx z, std::span<const cplx> via = {},
                 const PathOptions& opts = {});

/// Complex-valued version of integrate_X (before taking real parts).
CVec3 integrate_phi(const Configuration& c, cplx z0, cplx z, std::span<const cplx> via = {},
                    const PathOptions& opts = {});

/// Log-polar grid z = r_i exp(i theta_j) on r_min <= r <= r_max.
struct GridSpec {
  double r_min = 0.1;
  double r_max = 10.0;
  int n_r = 40;
  int n_theta = 80;
  /// Radius of the disk dropped around every p_k. Zero selects the per-puncture
  /// default of 0.1 times the distance to the nearest other singularity.
  double puncture_cut = 0.0;
  std::optional<cplx> base_point;
};

/// Radial extent 0.25 min|p_k| .. 4 max|p_k| at the default resolution.
GridSpec default_grid(const Configuration& c);

struct PunctureLoop {
  std::size_t index = 0;
  bool interior = false;  // false when the enclosing grid box leaves the annulus
  Vec3 closure{};
};

struct SurfaceMesh {
  int n_r = 0;
  int n_cols = 0;  // n_theta + 1: column n_theta repeats theta = 0 after a full turn
  std::vector<std::int64_t> vertex_index;  // grid (i, j) -> kept vertex, or -1
  std::vector<Vec3> vertices;
  std::vector<cplx> parameters;  // z of each kept vertex
  std::vector<std::array<std::size_t, 4>> faces;
  cplx base_point{0.0};

  Vec3 seam_offset{};       // mean of X(r_i e^{2 pi i}) - X(r_i) over rows kept at both ends
  double seam_spread = 0.0;  // largest deviation of a row from the mean
  int seam_rows = 0;
  double edge_closure_defect = 0.0;  // worst |X(u) + edge integral - X(v)| over non-tree edges
  std::vector<PunctureLoop> puncture_loops;
  double balance_max_abs = 0.0;
  std::vector<std::string> warnings;

  std::int64_t index_of(int i, int j) const { return vertex_index[static_cast<std::size_t>(i * n_cols + j)]; }

  /// max |seam_offset - (0, s pi, 0)| over s = +-1.
  double seam_defect() const noexcept;
  double max_puncture_loop_defect() const noexcept;
};

/// Integrates X over the grid along a BFS spanning tree rooted at the vertex
/// nearest the base point, with X(base point) = 0. Cells meeting a cut disk
/// are left out.
SurfaceMesh build_mesh(const Configuration& c, const GridSpec& g, const PathOptions& opts = {.tol = 1e-10});

/// Wavefront OBJ: `v` lines then 1-based quad `f` lines. Returns bytes written.
std::size_t export_obj(const SurfaceMesh& mesh, std::ostream& sink);

}  // namespace minsurf
