#pragma once

// Criticality and strict-maximality checks for minima of smooth families:
// differentials, dependencies, restricted second-order forms and the
// conditions (A), (B), (C) of the sufficient criterion.

#include "cylcert/jets.hpp"
#include "cylcert/positivity.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cylcert {

/// F_u(x) = l_u . x + x^T q_u x + o(|x|^2) for each member u.
struct FunctionJetFamily {
  struct Member {
    std::string label;
    Eigen::VectorXd linear;
    Eigen::MatrixXd quad;
  };

  std::vector<std::string> var_names;
  std::vector<Member> members;
  /// Subfamily index of each member.
  std::vector<int> group_of;

  Eigen::Index n_vars() const { return static_cast<Eigen::Index>(var_names.size()); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(members.size()); }
  /// Members as rows.
  Eigen::MatrixXd linear_matrix() const;
  int n_groups() const;
  /// Throws on size mismatches or asymmetric quadratic parts.
  void validate() const;
};

/// Builds the family of d_u^2 - d_u^2(0) along a chart.
FunctionJetFamily jet_family(const RotationChart& chart, const std::vector<LabeledPair>& pairs);

/// The 12 non-parallel pairs of O6 in the 15-parameter model, grouped.
FunctionJetFamily o6_jet_family();

struct DependencyVector {
  Eigen::VectorXd mu;
  bool convex = false;
};

/// Orthonormal basis (columns) of the common kernel E of the linear parts.
Eigen::MatrixXd kernel_subspace(const FunctionJetFamily& fam);

/// A basis of the linear relations among the linear parts. Representatives
/// come from the reduced row echelon form, so relations supported on
/// separate groups of members stay separate. Convex ones are scaled to sum
/// 1, the others to unit length.
std::vector<DependencyVector> convex_dependencies(const FunctionJetFamily& fam);

/// Whether some nonnegative relation with sum 1 exists at all.
bool has_convex_dependency(const FunctionJetFamily& fam);

struct RestrictedForm {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd gram;
};

/// gram = B^T (sum_u mu_u q_u) B for the columns B of `basis`, which need not
/// be orthonormal.
RestrictedForm restrict_form(const FunctionJetFamily& fam, const Eigen::VectorXd& mu,
                             const Eigen::MatrixXd& basis);

enum class Precision { double_precision, extended };

PositivityCertificate certify_family_positivity(const std::vector<Eigen::MatrixXd>& forms,
                                                const PositivityOptions& opt = {},
                                                Precision precision = Precision::double_precision);

/// Gram matrices of -Upsilon_a / 2 in the orthonormal SVD basis of E, i.e.
/// the forms -q[lambda_a] restricted to E.
std::vector<Eigen::MatrixXd> o6_negated_forms();

struct EliminationResult {
  bool only_zero_solution = false;
  long samples = 0;
  /// Smallest max(-Upsilon_1, -Upsilon_2, -Upsilon_3) over the samples.
  double min_value = 0.0;
  Eigen::VectorXd argmin;
};

/// Random unit points of E in (omega, c) coordinates: no point with
/// min(Upsilon_a) >= -1e-9 may exist.
EliminationResult elimination_oracle_O6(long samples = 1000000, std::uint64_t seed = 0);

/// Whether e satisfies Upsilon_a >= 0 for a = 1, 2, 3.
bool satisfies_all_upsilon(const EPointParams& e, double tol = 0.0);

struct SylvesterResult {
  /// Leading principal minors of orders 2..5 of twice the Gram matrix.
  std::array<double, 4> minors{};
  bool positive = false;
};

/// Twice the Gram matrix of -(Upsilon~_1 + alpha Upsilon_2 + beta Upsilon_3)
/// in the coordinates (c1-, c2+, c2-, c3+, c3-).
Eigen::Matrix<double, 5, 5> sylvester_gram(double alpha, double beta);

SylvesterResult no_positive_convex_combination(double alpha, double beta);

/// Discriminant of alpha - 3 alpha beta + alpha^2 beta + beta^2 as a
/// quadratic in alpha.
double m_discriminant(double beta);

struct SylvesterScan {
  int grid = 0;
  long points = 0;
  long positive_points = 0;
  long beta_above_one = 0;
  /// Points with beta > 1 where the order-5 minor is positive.
  long m_minor_positive = 0;
  /// Largest discriminant seen for beta > 1.
  double max_discriminant = -std::numeric_limits<double>::infinity();
  bool holds() const { return positive_points == 0 && m_minor_positive == 0 && max_discriminant < 0; }
};

/// Log-spaced grid on [lo, hi]^2.
SylvesterScan sylvester_scan(int grid = 500, double lo = 0.01, double hi = 10.0);

struct GroupCheck {
  int group = 0;
  int kernel_dim = 0;
  bool convex = false;
  Eigen::VectorXd lambda;
  std::vector<int> support;
};

struct Lq2bReport {
  bool a_pass = false;
  std::vector<GroupCheck> groups;
  bool b_pass = false;
  std::vector<std::string> b_message;
  int e_dim = 0;
  PositivityCertificate c;
  bool c_pass = false;
  std::string verdict;
};

Lq2bReport check_lq2b_conditions(const FunctionJetFamily& fam, const PositivityOptions& opt = {},
                                 Precision precision = Precision::double_precision);

/// The family in new variables x = A y: l -> A^T l, q -> A^T q A.
FunctionJetFamily change_variables(const FunctionJetFamily& fam, const Eigen::MatrixXd& a);

struct StabilityRow {
  double epsilon = 0.0;
  int trials = 0;
  int certified = 0;
  int failed = 0;
  int inconclusive = 0;
  bool below_threshold = false;
};

struct StabilityProbe {
  double v_constant = 0.0;
  double w_constant = 0.0;
  std::vector<StabilityRow> rows;
  /// Smallest epsilon with a failed or inconclusive trial, or -1.
  double first_failure = -1.0;
  /// Every trial below 0.9 v / w certified.
  bool stable_below_threshold = true;
};

/// Re-certifies {Q_a + eps P_a} for random symmetric P_a of spectral norm 1.
StabilityProbe perturbation_stability_probe(const std::vector<Eigen::MatrixXd>& forms,
                                            const std::vector<double>& epsilons, int trials = 4,
                                            std::uint64_t seed = 0, const PositivityOptions& opt = {});

}  // namespace cylcert
