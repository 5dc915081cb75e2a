#pragma once

// Derivative-free exploration of the minimax distance near a configuration:
// searches for unlocking deformations and measures decay rates.

#include "cylcert/chart.hpp"

#include <cstdint>
#include <vector>

namespace cylcert {

/// D or D~ at chart point p * t minus its base value. Throws on p = 0.
double min_distance_gain(const RotationChart& chart, const Eigen::VectorXd& p, double t, bool skip_parallel);

struct UnlockOptions {
  int seeds = 64;
  int iters = 200;
  double t_max = 1e-2;
  bool skip_parallel = true;
  /// Also start inside the fixed subspaces of pairs of symmetries.
  bool symmetry_seeding = false;
  int subspace_starts = 2;
  /// Number of best subspace results refined in the full space.
  int polish = 4;
  std::uint64_t seed = 0;
  /// The final direction is re-evaluated at t_max * 2^-k, k < t_levels.
  int t_levels = 8;
};

struct UnlockResult {
  double base_value = 0.0;
  double best_gain = 0.0;
  double best_t = 0.0;
  Eigen::VectorXd best_direction;
  long evaluations = 0;
  int subspaces = 0;
};

UnlockResult unlock_search(const RotationChart& chart, const UnlockOptions& opt = {});

struct UnlockSetup {
  RotationChart chart;
  UnlockOptions options;
};

/// O6: the 15-parameter model, D~ and t_max = 1e-2. Anything else: the
/// unpinned local chart (global rotations do not change distances), D over
/// all pairs, t_max = 0.1 and symmetry seeding.
UnlockSetup default_unlock_setup(const LineConfiguration& cfg);

/// Linear action of a symmetry on chart coordinates at the base point,
/// modulo global rotations (least squares).
Eigen::MatrixXd tangent_action(const RotationChart& chart, const Mat3d& g, const std::vector<std::size_t>& perm);

/// Distinct nonzero subspaces fixed by single symmetries and by pairs of
/// symmetries, as orthonormal column bases.
std::vector<Eigen::MatrixXd> symmetric_subspaces(const RotationChart& chart);

/// Least-squares slope of log(value) against log(t). Needs at least three
/// scales; NaN if some value is not positive.
double fit_exponent(const std::vector<double>& ts, const std::vector<double>& values);

struct DecayOptions {
  int directions = 100;
  std::vector<double> ts{1e-4, 3.1622776601683794e-4, 1e-3, 3.1622776601683794e-3, 1e-2};
  std::uint64_t seed = 0;
  bool skip_parallel = true;
};

struct DecayFit {
  Eigen::VectorXd direction;
  bool in_e = false;
  std::vector<double> decay;
  double exponent = 0.0;
};

struct DecayReport {
  std::vector<double> ts;
  std::vector<DecayFit> fits;
  /// Range of decay / t^2 over the directions in E.
  double c_d = 0.0;
  double c_u = 0.0;
  double min_exponent(bool in_e) const;
  double max_exponent(bool in_e) const;
};

/// Random unit directions, `directions` inside span(e_basis) and as many
/// generic ones. With an empty basis only generic directions are probed.
DecayReport decay_probe(const RotationChart& chart, const Eigen::MatrixXd& e_basis, const DecayOptions& opt = {});

}  // namespace cylcert
