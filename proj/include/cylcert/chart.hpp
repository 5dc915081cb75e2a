#pragma once

// Rotation charts: local coordinates on the manifold of tangent-line
// configurations near a base configuration.
//
// Line k moves by R_{u0}^{p0 t} R_{u1}^{p1 t} R_{u2}^{p2 t}, so the rotation
// about the last axis is applied first. Each angle is either a chart variable
// or pinned to zero.

#include "cylcert/canon.hpp"

#include <array>
#include <string>
#include <vector>

namespace cylcert {

class RotationChart {
 public:
  struct LineAxes {
    std::array<Vec3d, 3> axes;
    /// Chart variable driving each axis, or -1 when pinned.
    std::array<int, 3> var;
  };

  RotationChart(LineConfiguration base, std::vector<LineAxes> line_axes,
                std::vector<std::string> var_names);

  const LineConfiguration& base() const { return base_; }
  const std::vector<LineAxes>& line_axes() const { return axes_; }
  const std::vector<std::string>& var_names() const { return names_; }
  Eigen::Index n_vars() const { return static_cast<Eigen::Index>(names_.size()); }

  /// The rotation matrix moving line k for chart point p at time t.
  Mat3d line_rotation(std::size_t k, const Eigen::VectorXd& p, double t) const;

  /// Configuration at chart point p * t.
  LineConfiguration apply(const Eigen::VectorXd& p, double t = 1.0) const;

 private:
  LineConfiguration base_;
  std::vector<LineAxes> axes_;
  std::vector<std::string> names_;
};

/// The 15-parameter model on O6: line l_j^e rotates about rho^2 e_j (a),
/// rho e_j (b) and e_j (c), with a, b, c of l1+ pinned. Variable order
/// a1-, b1-, c1-, a2+, b2+, c2+, a2-, b2-, c2-, a3+, b3+, c3+, a3-, b3-, c3-.
RotationChart o6_chart(const LineConfiguration& base = build_O6());

/// Three rotations per line, about x_k, x_k cross xi_k and xi_k. With
/// pin_first, the first line is held fixed, which removes the global
/// rotations.
RotationChart local_rotation_chart(const LineConfiguration& cfg, bool pin_first = true);

/// Stacks (x_k, xi_k) for every line, each xi_k signed to agree with the
/// corresponding line of `reference`.
Eigen::VectorXd stacked_coordinates(const LineConfiguration& cfg, const LineConfiguration& reference);

}  // namespace cylcert
