#pragma once

// Canonical configurations (O6, C6), their symmetries, and the minimax
// distance functions D and D~.

#include "cylcert/geom.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cylcert {

struct IndexPair {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// An ordered list of tangent lines with unique labels and a declared set of
/// pairs that are parallel at the base point. The declared pairs are
/// metadata: they are not re-detected when the lines move.
class LineConfiguration {
 public:
  LineConfiguration() = default;
  LineConfiguration(std::vector<TangentLine<double>> lines, std::vector<std::string> labels,
                    std::vector<IndexPair> parallel_pairs = {});

  const std::vector<TangentLine<double>>& lines() const { return lines_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<IndexPair>& parallel_pairs() const { return parallel_pairs_; }
  std::size_t size() const { return lines_.size(); }
  const TangentLine<double>& operator[](std::size_t i) const { return lines_[i]; }

  std::optional<std::size_t> index_of(const std::string& label) const;
  bool is_declared_parallel(std::size_t i, std::size_t j) const;

  /// Same labels and declared pairs, new line positions.
  LineConfiguration with_lines(std::vector<TangentLine<double>> lines) const;

 private:
  std::vector<TangentLine<double>> lines_;
  std::vector<std::string> labels_;
  std::vector<IndexPair> parallel_pairs_;
};

/// An orthogonal map of R^3; parity is the sign of its determinant.
class SymmetryElement {
 public:
  explicit SymmetryElement(const Mat3d& matrix);

  const Mat3d& matrix() const { return matrix_; }
  int parity() const { return parity_; }

  static SymmetryElement identity() { return SymmetryElement(Mat3d::Identity()); }

 private:
  Mat3d matrix_;
  int parity_;
};

SymmetryElement compose(const SymmetryElement& a, const SymmetryElement& b);

/// The order-3 rotation e1 -> e2 -> e3 -> e1.
SymmetryElement cyclic_rotation();
/// The half turn about the x axis.
SymmetryElement half_turn_x();
/// v -> -v.
SymmetryElement central_reflection();

/// Closure of `generators` under composition. Throws if more than
/// `max_order` distinct elements appear.
std::vector<SymmetryElement> generate_group(const std::vector<SymmetryElement>& generators,
                                            std::size_t max_order = 1024);

/// All 48 signed permutation matrices.
std::vector<SymmetryElement> signed_permutations();

LineConfiguration apply(const SymmetryElement& g, const LineConfiguration& cfg);

/// Label order l1+, l2+, l3+, l1-, l2-, l3-; parallel pairs (lj+, lj-).
LineConfiguration build_O6();
/// Six vertical lines touching the equator at longitudes k * 60 degrees;
/// opposite lines declared parallel.
LineConfiguration build_C6();
/// O6 rotated by a quarter turn: touch points on the axes, with directions
/// y at +-e1, z at +-e2, x at +-e3.
LineConfiguration build_O6_alternative();

const std::vector<std::string>& o6_labels();
bool has_o6_labels(const LineConfiguration& cfg);
/// O6 labels, lines within 1e-12 of build_O6() and the same parallel pairs.
bool is_canonical_o6(const LineConfiguration& cfg);

/// Radius of equal touching cylinders whose generators are at distance d.
double radius_from_distance(double d);
/// Inverse of radius_from_distance.
double distance_from_radius(double r);

/// Ties closer than this are reported together.
inline constexpr double kTieTolerance = 1e-9;

struct MinDistance {
  double value = 0.0;
  std::vector<IndexPair> minimizers;
};

/// D (all pairs) or, with skip_parallel, D~ (declared parallel pairs left
/// out). Requires at least two lines.
MinDistance min_distance(const LineConfiguration& cfg, bool skip_parallel);

/// Pairwise distances (not squared), symmetric with a zero diagonal.
Eigen::MatrixXd distance_table(const LineConfiguration& cfg);

/// Tolerance used when matching lines by config_norm_distance.
inline constexpr double kOrbitTolerance = 1e-9;

/// If g maps every line of `from` onto some line of `to`, the induced index
/// map; std::nullopt otherwise.
std::optional<std::vector<std::size_t>> congruence_map(const LineConfiguration& from,
                                                       const LineConfiguration& to,
                                                       const SymmetryElement& g);

/// Permutation of line indices induced by g when g stabilizes cfg.
std::optional<std::vector<std::size_t>> symmetry_orbit_check(const LineConfiguration& cfg,
                                                             const SymmetryElement& g);

/// Every orthogonal map stabilizing the line set. An element is fixed by the
/// image of the first line's frame (x, xi, x cross xi), so at most 4n
/// candidates are tested.
std::vector<SymmetryElement> symmetry_group(const LineConfiguration& cfg);

}  // namespace cylcert
