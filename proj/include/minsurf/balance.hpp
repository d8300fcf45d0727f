#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

/// Catenoidal-end locations p_k and their real necksizes alpha_k.
/// The annular ends sit at 0 and infinity, so no p_k may be zero.
struct Configuration {
  std::vector<cplx> points;
  std::vector<double> necksizes;
  std::string label;

  std::size_t size() const noexcept { return points.size(); }

  /// Throws ConfigurationError on mismatched lengths, an empty set, a zero
  /// or non-finite point, a zero or non-finite necksize, or coincident points.
  void check_structure() const;

  /// |sum alpha_k|.
  double necksize_sum_defect() const noexcept;

  /// Sum alpha_k = 0 to within 1e-14 * max(1, sum |alpha_k|).
  bool necksizes_balanced() const noexcept;
};

inline constexpr double kNecksizeSumTol = 1e-14;

struct BalanceReport {
  std::vector<cplx> residuals;
  double max_abs = 0.0;
  /// sum_k p_k alpha_k F_k. Equals (sum alpha)^2 identically.
  cplx residue_theorem_defect{0.0};
  /// Sum of |.| of every term entering the defect; the rounding scale.
  double defect_scale = 0.0;
  /// jacobian(k, j) = dF_k / dp_j (the F_k are holomorphic in the p_j).
  Eigen::MatrixXcd jacobian;
};

/// F_k = 2 sum_{j != k} alpha_j / (p_k - p_j) + alpha_k / p_k.
std::vector<cplx> balance_forces(const Configuration& c);

BalanceReport balance_residuals(const Configuration& c);

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 100;
  /// Extra Newton steps after tol is met, kept only while ||F|| keeps dropping.
  int polish_steps = 3;
  double min_step = 1.0 / 1048576.0;  // 2^-20
  double collision_fraction = 1e-10;
};

struct SolveResult {
  Configuration config;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;
};

/// Damped Newton on the free points with the analytic Jacobian. Points in
/// `fixed_indices` (0-based) are held; the equation of the highest fixed
/// index is dropped and re-checked afterwards. Necksizes are never changed.
SolveResult solve_balance(const Configuration& init, const std::set<std::size_t>& fixed_indices,
                          const SolverOptions& opts = {});

/// n roots of f_n with necksize 1/n each, plus p = 1 with necksize -1.
/// Roots are ordered by increasing real part.
Configuration legendre_config(int n);

/// Largest distance between matched points of two equal-size point sets,
/// pairing greedily by smallest remaining distance.
double root_set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace minsurf
