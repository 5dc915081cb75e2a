#include "cylcert/canon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace cylcert {

LineConfiguration::LineConfiguration(std::vector<TangentLine<double>> lines,
                                     std::vector<std::string> labels,
                                     std::vector<IndexPair> parallel_pairs)
    : lines_(std::move(lines)), labels_(std::move(labels)), parallel_pairs_(std::move(parallel_pairs)) {
  if (labels_.size() != lines_.size()) {
    throw std::invalid_argument("LineConfiguration: label count does not match line count");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("LineConfiguration: duplicate label '" + l + "'");
    }
  }
  for (const auto& p : parallel_pairs_) {
    if (p.first >= lines_.size() || p.second >= lines_.size() || p.first == p.second) {
      throw std::invalid_argument("LineConfiguration: invalid parallel pair index");
    }
  }
}

std::optional<std::size_t> LineConfiguration::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

bool LineConfiguration::is_declared_parallel(std::size_t i, std::size_t j) const {
  return std::any_of(parallel_pairs_.begin(), parallel_pairs_.end(), [&](const IndexPair& p) {
    return (p.first == i && p.second == j) || (p.first == j && p.second == i);
  });
}

LineConfiguration LineConfiguration::with_lines(std::vector<TangentLine<double>> lines) const {
  return LineConfiguration(std::move(lines), labels_, parallel_pairs_);
}

SymmetryElement::SymmetryElement(const Mat3d& matrix) : matrix_(matrix) {
  if (!((matrix_.transpose() * matrix_ - Mat3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12)) {
    throw std::invalid_argument("SymmetryElement: matrix is not orthogonal");
  }
  parity_ = matrix_.determinant() > 0 ? 1 : -1;
}

SymmetryElement compose(const SymmetryElement& a, const SymmetryElement& b) {
  return SymmetryElement(a.matrix() * b.matrix());
}

SymmetryElement cyclic_rotation() {
  Mat3d m;
  m.col(0) = Vec3d::UnitY();
  m.col(1) = Vec3d::UnitZ();
  m.col(2) = Vec3d::UnitX();
  return SymmetryElement(m);
}

SymmetryElement half_turn_x() {
  return SymmetryElement(Vec3d(1, -1, -1).asDiagonal().toDenseMatrix());
}

SymmetryElement central_reflection() { return SymmetryElement(-Mat3d::Identity()); }

namespace {

bool same_matrix(const Mat3d& a, const Mat3d& b) {
  return (a - b).cwiseAbs().maxCoeff() < 1e-9;
}

bool contains(const std::vector<SymmetryElement>& group, const Mat3d& m) {
  return std::any_of(group.begin(), group.end(),
                     [&](const SymmetryElement& g) { return same_matrix(g.matrix(), m); });
}

}  // namespace

std::vector<SymmetryElement> generate_group(const std::vector<SymmetryElement>& generators,
                                            std::size_t max_order) {
  std::vector<SymmetryElement> group{SymmetryElement::identity()};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const auto& g : generators) {
      const Mat3d m = g.matrix() * group[i].matrix();
      if (!contains(group, m)) {
        // Re-orthogonalize so rounding does not accumulate along long words.
        const Eigen::JacobiSVD<Mat3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        group.emplace_back(svd.matrixU() * svd.matrixV().transpose());
        if (group.size() > max_order) {
          throw std::runtime_error("generate_group: group exceeds the maximum order");
        }
      }
    }
  }
  return group;
}

std::vector<SymmetryElement> signed_permutations() {
  std::vector<SymmetryElement> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3d m = Mat3d::Zero();
      for (int c = 0; c < 3; ++c) {
        m(perm[c], c) = (signs >> c) & 1 ? -1.0 : 1.0;
      }
      out.emplace_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

LineConfiguration apply(const SymmetryElement& g, const LineConfiguration& cfg) {
  std::vector<TangentLine<double>> lines;
  lines.reserve(cfg.size());
  for (const auto& l : cfg.lines()) lines.push_back(rotate_line<double>(g.matrix(), l));
  return cfg.with_lines(std::move(lines));
}

const std::vector<std::string>& o6_labels() {
  static const std::vector<std::string> labels{"l1+", "l2+", "l3+", "l1-", "l2-", "l3-"};
  return labels;
}

bool has_o6_labels(const LineConfiguration& cfg) { return cfg.labels() == o6_labels(); }

bool is_canonical_o6(const LineConfiguration& cfg) {
  if (!has_o6_labels(cfg)) return false;
  const LineConfiguration o6 = build_O6();
  for (std::size_t k = 0; k < o6.size(); ++k) {
    if (!(config_norm_distance(cfg[k], o6[k]) <= 1e-12)) return false;
  }
  for (const auto& p : o6.parallel_pairs()) {
    if (!cfg.is_declared_parallel(p.first, p.second)) return false;
  }
  return cfg.parallel_pairs().size() == o6.parallel_pairs().size();
}

LineConfiguration build_O6() {
  const Mat3d rho = cyclic_rotation().matrix();
  const TangentLine<double> l1(Vec3d::UnitX(), Vec3d::UnitZ());
  std::vector<TangentLine<double>> lines;
  Mat3d power = Mat3d::Identity();
  for (int j = 0; j < 3; ++j) {
    lines.push_back(rotate_line<double>(power, l1));
    power = rho * power;
  }
  for (int j = 0; j < 3; ++j) {
    lines.push_back(rotate_line<double>(central_reflection().matrix(), lines[j]));
  }
  return LineConfiguration(std::move(lines), o6_labels(), {{0, 3}, {1, 4}, {2, 5}});
}

LineConfiguration build_C6() {
  std::vector<TangentLine<double>> lines;
  std::vector<std::string> labels;
  for (int k = 0; k < 6; ++k) {
    const double phi = k * M_PI / 3.0;
    lines.emplace_back(Vec3d(std::cos(phi), std::sin(phi), 0.0), Vec3d::UnitZ());
    labels.push_back("c" + std::to_string(k));
  }
  return LineConfiguration(std::move(lines), std::move(labels), {{0, 3}, {1, 4}, {2, 5}});
}

LineConfiguration build_O6_alternative() {
  std::vector<TangentLine<double>> lines{
      {Vec3d::UnitX(), Vec3d::UnitY()}, {Vec3d::UnitY(), Vec3d::UnitZ()}, {Vec3d::UnitZ(), Vec3d::UnitX()},
      {-Vec3d::UnitX(), Vec3d::UnitY()}, {-Vec3d::UnitY(), Vec3d::UnitZ()}, {-Vec3d::UnitZ(), Vec3d::UnitX()}};
  return LineConfiguration(std::move(lines), o6_labels(), {{0, 3}, {1, 4}, {2, 5}});
}

double radius_from_distance(double d) {
  if (!(d >= 0.0 && d < 2.0)) {
    throw std::domain_error("radius_from_distance: distance must lie in [0, 2)");
  }
  return d / (2.0 - d);
}

double distance_from_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::domain_error("distance_from_radius: radius must be finite and nonnegative");
  }
  return 2.0 * r / (1.0 + r);
}

MinDistance min_distance(const LineConfiguration& cfg, bool skip_parallel) {
  if (cfg.size() < 2) {
    throw std::invalid_argument("min_distance: need at least two lines");
  }
  std::vector<std::pair<double, IndexPair>> values;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.size(); ++j) {
      if (skip_parallel && cfg.is_declared_parallel(i, j)) continue;
      values.push_back({line_distance(cfg[i], cfg[j]), {i, j}});
    }
  }
  if (values.empty()) {
    throw std::invalid_argument("min_distance: every pair is declared parallel");
  }
  MinDistance out;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& v : values) out.value = std::min(out.value, v.first);
  for (const auto& v : values) {
    if (v.first <= out.value + kTieTolerance) out.minimizers.push_back(v.second);
  }
  return out;
}

Eigen::MatrixXd distance_table(const LineConfiguration& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      t(i, j) = t(j, i) = line_distance(cfg[i], cfg[j]);
    }
  }
  return t;
}

std::optional<std::vector<std::size_t>> congruence_map(const LineConfiguration& from,
                                                       const LineConfiguration& to,
                                                       const SymmetryElement& g) {
  if (from.size() != to.size()) return std::nullopt;
  std::vector<std::size_t> map(from.size());
  std::vector<bool> used(to.size(), false);
  for (std::size_t i = 0; i < from.size(); ++i) {
    const TangentLine<double> image = rotate_line<double>(g.matrix(), from[i]);
    bool found = false;
    for (std::size_t j = 0; j < to.size() && !found; ++j) {
      if (!used[j] && config_norm_distance(image, to[j]) < kOrbitTolerance) {
        map[i] = j;
        used[j] = true;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return map;
}

std::optional<std::vector<std::size_t>> symmetry_orbit_check(const LineConfiguration& cfg,
                                                             const SymmetryElement& g) {
  return congruence_map(cfg, cfg, g);
}

namespace {

Mat3d line_frame(const TangentLine<double>& l) {
  Mat3d f;
  f.col(0) = l.touch_point();
  f.col(1) = l.direction();
  f.col(2) = l.touch_point().cross(l.direction());
  return f;
}

}  // namespace

std::vector<SymmetryElement> symmetry_group(const LineConfiguration& cfg) {
  std::vector<SymmetryElement> group;
  if (cfg.size() == 0) return group;
  const Mat3d f0 = line_frame(cfg[0]);
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    const Mat3d fk = line_frame(cfg[k]);
    for (const double s1 : {1.0, -1.0}) {
      for (const double s2 : {1.0, -1.0}) {
        const Mat3d m = fk * Vec3d(1.0, s1, s2).asDiagonal() * f0.transpose();
        const SymmetryElement g(m);
        if (!contains(group, m) && symmetry_orbit_check(cfg, g)) group.push_back(g);
      }
    }
  }
  return group;
}

}  // namespace cylcert
