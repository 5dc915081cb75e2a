#pragma once

// Perturbations of O6 and Taylor coefficients of squared line distances
// along them.

#include "cylcert/chart.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace cylcert {

enum class Sign { plus, minus };
enum class AxisRole { a, b, c };

/// The 18 coefficients a_j^e, b_j^e, c_j^e of the O6 model. The entries of
/// l1+ are pinned to zero, leaving 15 free values ordered as in o6_chart().
class PerturbationParams {
 public:
  static constexpr int kFree = 15;

  PerturbationParams() : v_(Eigen::VectorXd::Zero(kFree)) {}
  explicit PerturbationParams(const Eigen::VectorXd& free_values);

  double get(int j, Sign s, AxisRole r) const;
  /// Throws std::invalid_argument when (j, s) = (1, +), which is gauge fixed.
  PerturbationParams with(int j, Sign s, AxisRole r, double value) const;

  const Eigen::VectorXd& vector() const { return v_; }

  /// Position of (j, s, r) in vector(), or -1 for the pinned entries.
  static int index(int j, Sign s, AxisRole r);
  static const std::vector<std::string>& names();

 private:
  Eigen::VectorXd v_;
};

/// A point of E in the coordinates (omega, c1-, c2+, c2-, c3+, c3-).
struct EPointParams {
  double omega = 0.0;
  double c1m = 0.0;
  double c2p = 0.0;
  double c2m = 0.0;
  double c3p = 0.0;
  double c3m = 0.0;

  static EPointParams from_vector(const Eigen::VectorXd& v);
  Eigen::VectorXd vector() const;

  /// b2- = a1- = b2+ = a3+ = b1- = a3- = 0, b3- = a2- = b3+ = a2+ = omega,
  /// and the c entries copied.
  PerturbationParams lift() const;
};

/// 15 x 6 matrix whose columns are the lifts of the coordinate vectors of E.
Eigen::MatrixXd e_lift_matrix();

/// Moves each line of O6 by the rotations of the model at time t.
LineConfiguration deform(const LineConfiguration& cfg, const PerturbationParams& p, double t);

struct LabeledPair {
  IndexPair pair;
  std::string label;
  int group = 0;
};

/// The 12 non-parallel O6 pairs, in three groups of four:
///   (l1+,l2-) (l1+,l2+) (l1-,l2-) (l1-,l2+)
///   (l1+,l3-) (l1+,l3+) (l1-,l3-) (l1-,l3+)
///   (l3-,l2-) (l3-,l2+) (l3+,l2-) (l3+,l2+)
const std::vector<LabeledPair>& o6_pairs();

/// Every unordered pair of `cfg`, optionally without the declared parallel
/// ones; groups are all zero.
std::vector<LabeledPair> all_pairs(const LineConfiguration& cfg, bool skip_parallel);

enum class JetSource { closed_form, series, finite_difference };
std::string to_string(JetSource s);

/// Coefficients of t and t^2 in the squared distance of each pair.
struct JetTable {
  std::vector<LabeledPair> pairs;
  Eigen::VectorXd order1;
  Eigen::VectorXd order2;
  bool has_order1 = false;
  bool has_order2 = false;
  JetSource source = JetSource::closed_form;
  /// Truncation error estimates (finite differences only).
  Eigen::VectorXd error1;
  Eigen::VectorXd error2;
  /// Labels of entries whose error estimate exceeds kJetErrorFlag.
  std::vector<std::string> flagged;
};

inline constexpr double kJetErrorFlag = 1e-6;

/// First-order coefficients of the 12 O6 pairs written out as linear forms.
JetTable first_order_closed_form(const PerturbationParams& p);

/// (Upsilon_1, Upsilon_2, Upsilon_3) as explicit quadratic polynomials.
std::array<double, 3> second_order_combinations(const EPointParams& e);

/// Exact first- and second-order coefficients along p, obtained by
/// propagating truncated power series through the rotation products and the
/// distance formula. Pairs must be non-parallel at the base point.
JetTable series_jets(const RotationChart& chart, const Eigen::VectorXd& p,
                     const std::vector<LabeledPair>& pairs);

/// Linear parts l_u and quadratic parts q_u with
/// d_u^2(p t) = d_u^2(0) + (l_u . p) t + (p^T q_u p) t^2 + O(t^3).
struct PairExpansion {
  Eigen::VectorXd base;
  Eigen::MatrixXd linear;
  std::vector<Eigen::MatrixXd> quad;
};

PairExpansion pair_expansion(const RotationChart& chart, const std::vector<LabeledPair>& pairs);

struct FiniteDifferenceSteps {
  double h1 = 1e-5;
  double h2 = 1e-3;
};

using ConfigPath = std::function<LineConfiguration(double)>;

/// Central differences (order 1) or the 5-point stencil with one Richardson
/// step (order 2) of the squared distances along an arbitrary path.
JetTable finite_difference_jets(const ConfigPath& path, const std::vector<LabeledPair>& pairs, int order,
                                const FiniteDifferenceSteps& steps = {});

JetTable finite_difference_jets(const RotationChart& chart, const Eigen::VectorXd& p,
                                const std::vector<LabeledPair>& pairs, int order,
                                const FiniteDifferenceSteps& steps = {});

/// The O6 model on its 12 pairs.
JetTable finite_difference_jets(const LineConfiguration& cfg, const PerturbationParams& p, int order,
                                const FiniteDifferenceSteps& steps = {});

}  // namespace cylcert
