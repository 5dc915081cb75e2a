#include "cylcert/chart.hpp"

#include <stdexcept>

namespace cylcert {

RotationChart::RotationChart(LineConfiguration base, std::vector<LineAxes> line_axes,
                             std::vector<std::string> var_names)
    : base_(std::move(base)), axes_(std::move(line_axes)), names_(std::move(var_names)) {
  if (axes_.size() != base_.size()) {
    throw std::invalid_argument("RotationChart: one axis triple per line required");
  }
  const int n = static_cast<int>(names_.size());
  for (const auto& la : axes_) {
    for (int i = 0; i < 3; ++i) {
      if (la.var[i] < -1 || la.var[i] >= n) {
        throw std::invalid_argument("RotationChart: variable index out of range");
      }
      if (la.var[i] >= 0 && !(la.axes[i].norm() > 0.0)) {
        throw std::invalid_argument("RotationChart: zero rotation axis");
      }
    }
  }
}

Mat3d RotationChart::line_rotation(std::size_t k, const Eigen::VectorXd& p, double t) const {
  Mat3d m = Mat3d::Identity();
  const auto& la = axes_[k];
  for (int i = 0; i < 3; ++i) {
    if (la.var[i] < 0) continue;
    const double angle = p[la.var[i]] * t;
    if (angle != 0.0) m = m * Eigen::AngleAxisd(angle, la.axes[i].normalized()).toRotationMatrix();
  }
  return m;
}

LineConfiguration RotationChart::apply(const Eigen::VectorXd& p, double t) const {
  if (p.size() != n_vars()) {
    throw std::invalid_argument("RotationChart::apply: parameter vector has the wrong size");
  }
  std::vector<TangentLine<double>> lines;
  lines.reserve(base_.size());
  for (std::size_t k = 0; k < base_.size(); ++k) {
    const Mat3d m = line_rotation(k, p, t);
    const auto& l = base_[k];
    lines.emplace_back(m * l.touch_point(), m * l.direction());
  }
  return base_.with_lines(std::move(lines));
}

RotationChart o6_chart(const LineConfiguration& base) {
  if (!has_o6_labels(base)) {
    throw std::invalid_argument("o6_chart: configuration does not carry the O6 labels");
  }
  const Mat3d rho = cyclic_rotation().matrix();
  std::vector<RotationChart::LineAxes> axes(6);
  std::vector<std::string> names;
  const char roles[3] = {'a', 'b', 'c'};
  // Line index k = 3 * (sign is minus) + (j - 1); variables are numbered in
  // the order (j, sign) = (1,-), (2,+), (2,-), (3,+), (3,-).
  for (int j = 1; j <= 3; ++j) {
    const Vec3d e = Vec3d::Unit(j - 1);
    for (int s = 0; s < 2; ++s) {
      auto& la = axes[3 * s + (j - 1)];
      la.axes = {rho * rho * e, rho * e, e};
      for (int r = 0; r < 3; ++r) {
        if (j == 1 && s == 0) {
          la.var[r] = -1;
          continue;
        }
        la.var[r] = static_cast<int>(names.size());
        names.push_back(std::string(1, roles[r]) + std::to_string(j) + (s == 0 ? "+" : "-"));
      }
    }
  }
  return RotationChart(base, std::move(axes), std::move(names));
}

RotationChart local_rotation_chart(const LineConfiguration& cfg, bool pin_first) {
  std::vector<RotationChart::LineAxes> axes(cfg.size());
  std::vector<std::string> names;
  const char* suffix[3] = {"/x", "/n", "/d"};
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    const Vec3d x = cfg[k].touch_point();
    const Vec3d d = cfg[k].direction();
    axes[k].axes = {x, x.cross(d), d};
    for (int i = 0; i < 3; ++i) {
      if (pin_first && k == 0) {
        axes[k].var[i] = -1;
      } else {
        axes[k].var[i] = static_cast<int>(names.size());
        names.push_back(cfg.labels()[k] + suffix[i]);
      }
    }
  }
  return RotationChart(cfg, std::move(axes), std::move(names));
}

Eigen::VectorXd stacked_coordinates(const LineConfiguration& cfg, const LineConfiguration& reference) {
  if (cfg.size() != reference.size()) {
    throw std::invalid_argument("stacked_coordinates: size mismatch");
  }
  Eigen::VectorXd v(6 * static_cast<Eigen::Index>(cfg.size()));
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    const auto o = static_cast<Eigen::Index>(6 * k);
    Vec3d d = cfg[k].direction();
    if (d.dot(reference[k].direction()) < 0) d = -d;
    v.segment<3>(o) = cfg[k].touch_point();
    v.segment<3>(o + 3) = d;
  }
  return v;
}

}  // namespace cylcert
