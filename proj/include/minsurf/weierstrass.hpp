#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "minsurf/balance.hpp"

namespace minsurf {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

/// Gauss map G(z) = z sum_j alpha_j / (z - p_j) and height differential
/// dh = h(z) dz with h(z) = sum_j alpha_j / (z - p_j). Nothing is cached;
/// the object only references its configuration.
class WeierstrassData {
 public:
  explicit WeierstrassData(const Configuration& c);

  const Configuration& config() const noexcept { return *config_; }

  /// Throws PoleError when z sits on some p_k (relative distance 1e-14).
  cplx height(cplx z) const;
  cplx gauss(cplx z) const { return z * height(z); }

  /// (1/2 (1/G - G) h, i/2 (1/G + G) h, h). Uses h / G = 1 / z, so zeros
  /// of G are not singular here; only 0 and the p_k are.
  CVec3 integrand(cplx z) const;

  /// Distance from z to the nearest of {0, p_1, ..., p_m}.
  double singularity_distance(cplx z) const noexcept;
  std::vector<cplx> singularities() const;

 private:
  const Configuration* config_;
};

cplx gauss_map(const Configuration& c, cplx z);

/// res_{p_k}(G dh) = p_k alpha_k F_k in closed form. k is 0-based.
cplx gdh_residue(const Configuration& c, std::size_t k);

struct PeriodVector {
  Vec3 coords{};
  cplx center{0.0};
  double radius = 0.0;
  int nodes = 0;  // trapezoid nodes at acceptance
};

struct ContourOptions {
  double tol = 1e-10;
  int initial_nodes = 16;
  int max_nodes = 1 << 20;
  double clearance = 1e-6;  // relative to radius
};

/// Counterclockwise circle integral of a vector of analytic functions by the
/// trapezoid rule, doubling nodes until successive sums agree to opts.tol.
/// Throws GeometryError if the circle passes within clearance*radius of a
/// listed singularity, QuadratureError if max_nodes is exceeded.
template <std::size_t N>
std::array<cplx, N> circle_integral(const std::function<std::array<cplx, N>(cplx)>& f, cplx center, double radius,
                                    const std::vector<cplx>& singular_points, const ContourOptions& opts = {},
                                    int* nodes_used = nullptr);

/// Re of the counterclockwise integral of the Weierstrass integrand around
/// |z - center| = radius.
PeriodVector contour_period(const Configuration& c, cplx center, double radius, const ContourOptions& opts = {});

/// (1 / 2 pi i) times the contour integral of G h dz; the numerical twin of
/// gdh_residue (summed over the enclosed punctures).
cplx contour_gdh_residue(const Configuration& c, cplx center, double radius, const ContourOptions& opts = {});

/// Half the distance from point k (or from 0 when k == npos) to the nearest
/// other singularity.
double default_radius(const Configuration& c, std::size_t k);

struct ConditionCheck {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  std::string detail;
};

struct ConditionsReport {
  std::vector<ConditionCheck> checks;
  int order_g_at_zero = 0;       // k
  int order_dh_at_zero = 0;      // k - 1 when the end is annular
  int order_g_at_infinity = 0;   // j
  int order_dh_at_infinity = 0;  // j - 1
  bool all_passed() const noexcept;
};

/// Structural checks on (G, dh): shared zeros with multiplicity, end orders
/// at 0 and infinity, simple poles with residue ratio p_k, sum alpha = 0.
/// Failures are report entries; only malformed configurations throw.
ConditionsReport verify_conditions(const Configuration& c);

}  // namespace minsurf
