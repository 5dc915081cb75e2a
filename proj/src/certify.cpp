#include "cylcert/certify.hpp"

#include "cylcert/linalg.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace cylcert {

Eigen::MatrixXd FunctionJetFamily::linear_matrix() const {
  Eigen::MatrixXd l(size(), n_vars());
  for (Eigen::Index i = 0; i < size(); ++i) l.row(i) = members[static_cast<std::size_t>(i)].linear.transpose();
  return l;
}

int FunctionJetFamily::n_groups() const {
  int g = 0;
  for (const int v : group_of) g = std::max(g, v + 1);
  return g;
}

void FunctionJetFamily::validate() const {
  const Eigen::Index n = n_vars();
  for (const auto& m : members) {
    if (m.linear.size() != n || m.quad.rows() != n || m.quad.cols() != n) {
      throw std::invalid_argument("FunctionJetFamily: member '" + m.label + "' has the wrong dimension");
    }
    if (n > 0 && (m.quad - m.quad.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("FunctionJetFamily: quadratic part of '" + m.label + "' is not symmetric");
    }
  }
  if (!group_of.empty() && group_of.size() != members.size()) {
    throw std::invalid_argument("FunctionJetFamily: group_of must have one entry per member");
  }
  for (const int g : group_of) {
    if (g < 0) throw std::invalid_argument("FunctionJetFamily: negative group index");
  }
}

FunctionJetFamily jet_family(const RotationChart& chart, const std::vector<LabeledPair>& pairs) {
  const PairExpansion ex = pair_expansion(chart, pairs);
  FunctionJetFamily fam;
  fam.var_names = chart.var_names();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    fam.members.push_back({pairs[i].label, ex.linear.row(k).transpose(), ex.quad[i]});
    fam.group_of.push_back(pairs[i].group);
  }
  return fam;
}

FunctionJetFamily o6_jet_family() { return jet_family(o6_chart(), o6_pairs()); }

Eigen::MatrixXd kernel_subspace(const FunctionJetFamily& fam) {
  if (fam.size() == 0) return Eigen::MatrixXd::Identity(fam.n_vars(), fam.n_vars());
  return null_space(fam.linear_matrix());
}

namespace {

constexpr double kSupportTol = 1e-9;

// Scales v to sum 1 if it is sign-definite, and reports whether it was.
bool normalize_dependency(Eigen::VectorXd& v) {
  const double s = v.sum();
  const bool nonneg = (v.array() >= -kSupportTol).all();
  const bool nonpos = (v.array() <= kSupportTol).all();
  if ((nonneg || nonpos) && std::abs(s) > kSupportTol) {
    v /= s;
    v = v.unaryExpr([](double x) { return std::abs(x) <= kSupportTol ? 0.0 : x; });
    return true;
  }
  v.normalize();
  return false;
}

}  // namespace

std::vector<DependencyVector> convex_dependencies(const FunctionJetFamily& fam) {
  std::vector<DependencyVector> out;
  if (fam.size() == 0) return out;
  const Eigen::MatrixXd lt = fam.linear_matrix().transpose();
  const Eigen::MatrixXd kernel = left_null_space(fam.linear_matrix());
  if (kernel.cols() == 0) return out;
  const Eigen::MatrixXd reduced = rref(kernel.transpose(), 1e-10);
  for (Eigen::Index r = 0; r < reduced.rows(); ++r) {
    Eigen::VectorXd v = reduced.row(r).transpose();
    if (v.cwiseAbs().maxCoeff() <= kSupportTol) continue;
    DependencyVector d;
    d.convex = normalize_dependency(v);
    if (!d.convex) {
      // Look for a nonnegative relation on the same support.
      std::vector<Eigen::Index> supp;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > kSupportTol) supp.push_back(i);
      }
      const auto k = static_cast<Eigen::Index>(supp.size());
      Eigen::MatrixXd a(lt.rows() + 1, k);
      for (Eigen::Index j = 0; j < k; ++j) {
        a.col(j).head(lt.rows()) = lt.col(supp[j]);
        a(lt.rows(), j) = 1.0;
      }
      Eigen::VectorXd b = Eigen::VectorXd::Zero(lt.rows() + 1);
      b[lt.rows()] = 1.0;
      if (const auto mu = find_nonnegative_solution(a, b)) {
        v.setZero();
        for (Eigen::Index j = 0; j < k; ++j) v[supp[j]] = (*mu)[j];
        d.convex = true;
      }
    }
    d.mu = v;
    out.push_back(d);
  }
  return out;
}

bool has_convex_dependency(const FunctionJetFamily& fam) {
  if (fam.size() == 0) return false;
  const Eigen::MatrixXd lt = fam.linear_matrix().transpose();
  Eigen::MatrixXd a(lt.rows() + 1, lt.cols());
  a.topRows(lt.rows()) = lt;
  a.row(lt.rows()).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(lt.rows() + 1);
  b[lt.rows()] = 1.0;
  return find_nonnegative_solution(a, b).has_value();
}

RestrictedForm restrict_form(const FunctionJetFamily& fam, const Eigen::VectorXd& mu, const Eigen::MatrixXd& basis) {
  if (mu.size() != fam.size()) throw std::invalid_argument("restrict_form: mu has the wrong size");
  if (basis.rows() != fam.n_vars()) throw std::invalid_argument("restrict_form: basis has the wrong size");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(fam.n_vars(), fam.n_vars());
  for (Eigen::Index u = 0; u < fam.size(); ++u) {
    if (mu[u] != 0.0) q += mu[u] * fam.members[static_cast<std::size_t>(u)].quad;
  }
  RestrictedForm out;
  out.basis = basis;
  out.gram = basis.transpose() * q * basis;
  out.gram = 0.5 * (out.gram + out.gram.transpose()).eval();
  return out;
}

PositivityCertificate certify_family_positivity(const std::vector<Eigen::MatrixXd>& forms,
                                                const PositivityOptions& opt, Precision precision) {
  if (precision == Precision::extended) return certify_positivity<long double>(forms, opt);
  return certify_positivity<double>(forms, opt);
}

bool validate_certificate(const std::vector<Eigen::MatrixXd>& forms, const PositivityCertificate& cert,
                          long samples, std::uint64_t seed) {
  if (cert.verdict != Verdict::positively_defined || forms.empty()) return false;
  const Eigen::Index n = forms[0].rows();
  if (n == 0) return true;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (long s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
    x.normalize();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& f : forms) best = std::max(best, x.dot(f * x));
    if (best < cert.v_constant * (1 - 1e-6)) return false;
  }
  return true;
}

std::vector<Eigen::MatrixXd> o6_negated_forms() {
  const FunctionJetFamily fam = o6_jet_family();
  const Eigen::MatrixXd e = kernel_subspace(fam);
  std::vector<Eigen::MatrixXd> forms;
  for (int g = 0; g < 3; ++g) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(fam.size());
    for (Eigen::Index u = 0; u < fam.size(); ++u) {
      if (fam.group_of[static_cast<std::size_t>(u)] == g) mu[u] = 0.25;
    }
    forms.push_back(-restrict_form(fam, mu, e).gram);
  }
  return forms;
}

bool satisfies_all_upsilon(const EPointParams& e, double tol) {
  const auto u = second_order_combinations(e);
  return u[0] >= -tol && u[1] >= -tol && u[2] >= -tol;
}

EliminationResult elimination_oracle_O6(long samples, std::uint64_t seed) {
  EliminationResult r;
  r.samples = samples;
  r.min_value = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (long s = 0; s < samples; ++s) {
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = normal(rng);
    x.normalize();
    const auto u = second_order_combinations(EPointParams::from_vector(x));
    const double v = std::max({-u[0], -u[1], -u[2]});
    if (v < r.min_value) {
      r.min_value = v;
      r.argmin = x;
    }
  }
  r.only_zero_solution = r.min_value > 1e-9;
  return r;
}

Eigen::Matrix<double, 5, 5> sylvester_gram(double a, double b) {
  Eigen::Matrix<double, 5, 5> m;
  m << 1, -1, 1, -a, a,
      -1, 2 * b, 0, b, -b,
      1, 0, 2 * b, -b, b,
      -a, b, -b, 2 * a, 0,
      a, -b, b, 0, 2 * a;
  return m;
}

SylvesterResult no_positive_convex_combination(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) {
    throw std::invalid_argument("no_positive_convex_combination: alpha and beta must be positive");
  }
  const Eigen::Matrix<double, 5, 5> g = sylvester_gram(alpha, beta);
  SylvesterResult r;
  r.positive = true;
  for (int k = 2; k <= 5; ++k) {
    const Eigen::MatrixXd lead = g.topLeftCorner(k, k);
    r.minors[static_cast<std::size_t>(k - 2)] = lead.determinant();
    if (!(r.minors[static_cast<std::size_t>(k - 2)] > 0)) r.positive = false;
  }
  return r;
}

double m_discriminant(double beta) { return -(beta - 1) * (beta - 1) * (4 * beta - 1); }

SylvesterScan sylvester_scan(int grid, double lo, double hi) {
  SylvesterScan s;
  s.grid = grid;
  const double step = grid > 1 ? std::log(hi / lo) / (grid - 1) : 0.0;
  for (int i = 0; i < grid; ++i) {
    const double alpha = lo * std::exp(step * i);
    for (int j = 0; j < grid; ++j) {
      const double beta = lo * std::exp(step * j);
      const SylvesterResult r = no_positive_convex_combination(alpha, beta);
      ++s.points;
      if (r.positive) ++s.positive_points;
      if (beta > 1) {
        ++s.beta_above_one;
        if (r.minors[3] > 0) ++s.m_minor_positive;
        s.max_discriminant = std::max(s.max_discriminant, m_discriminant(beta));
      }
    }
  }
  return s;
}

Lq2bReport check_lq2b_conditions(const FunctionJetFamily& fam, const PositivityOptions& opt, Precision precision) {
  fam.validate();
  Lq2bReport rep;
  const int ng = fam.n_groups();
  const Eigen::MatrixXd l = fam.linear_matrix();

  rep.a_pass = ng > 0;
  std::vector<Eigen::VectorXd> lambdas;
  std::vector<std::set<Eigen::Index>> supports;
  for (int g = 0; g < ng; ++g) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index u = 0; u < fam.size(); ++u) {
      if (fam.group_of[static_cast<std::size_t>(u)] == g) rows.push_back(u);
    }
    GroupCheck gc;
    gc.group = g;
    Eigen::MatrixXd lg(static_cast<Eigen::Index>(rows.size()), fam.n_vars());
    for (std::size_t i = 0; i < rows.size(); ++i) lg.row(static_cast<Eigen::Index>(i)) = l.row(rows[i]);
    std::set<Eigen::Index> supp;
    for (Eigen::Index j = 0; j < lg.cols(); ++j) {
      if (lg.rows() > 0 && lg.col(j).cwiseAbs().maxCoeff() > kSupportTol) {
        supp.insert(j);
        gc.support.push_back(static_cast<int>(j));
      }
    }
    supports.push_back(supp);
    const bool degenerate = lg.rows() == 0 || lg.cwiseAbs().maxCoeff() <= kSupportTol;
    const Eigen::MatrixXd k = degenerate ? Eigen::MatrixXd::Identity(lg.rows(), lg.rows()) : left_null_space(lg);
    gc.kernel_dim = static_cast<int>(k.cols());
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(fam.size());
    if (gc.kernel_dim == 1 && !degenerate) {
      Eigen::VectorXd v = k.col(0);
      gc.convex = normalize_dependency(v);
      for (std::size_t i = 0; i < rows.size(); ++i) lambda[rows[i]] = v[static_cast<Eigen::Index>(i)];
    }
    gc.lambda = lambda;
    if (!(gc.kernel_dim == 1 && gc.convex && !degenerate)) rep.a_pass = false;
    lambdas.push_back(lambda);
    rep.groups.push_back(gc);
  }

  rep.b_pass = true;
  for (int a = 0; a < ng; ++a) {
    for (int b = a + 1; b < ng; ++b) {
      for (const Eigen::Index j : supports[static_cast<std::size_t>(a)]) {
        if (supports[static_cast<std::size_t>(b)].count(j)) {
          rep.b_pass = false;
          rep.b_message.push_back("variable " + fam.var_names[static_cast<std::size_t>(j)] + " is shared by groups " +
                                  std::to_string(a) + " and " + std::to_string(b));
        }
      }
    }
  }

  const Eigen::MatrixXd e = kernel_subspace(fam);
  rep.e_dim = static_cast<int>(e.cols());
  if (rep.a_pass) {
    std::vector<Eigen::MatrixXd> forms;
    for (const auto& lambda : lambdas) forms.push_back(-restrict_form(fam, lambda, e).gram);
    rep.c = certify_family_positivity(forms, opt, precision);
    rep.c_pass = rep.c.verdict == Verdict::positively_defined;
  }
  if (rep.a_pass && rep.b_pass && rep.c_pass) {
    rep.verdict = "strict_local_max";
  } else if (rep.a_pass && rep.b_pass && rep.c.verdict == Verdict::inconclusive) {
    rep.verdict = "inconclusive";
  } else {
    rep.verdict = "undetermined";
  }
  return rep;
}

FunctionJetFamily change_variables(const FunctionJetFamily& fam, const Eigen::MatrixXd& a) {
  if (a.rows() != fam.n_vars() || a.cols() != fam.n_vars()) {
    throw std::invalid_argument("change_variables: matrix has the wrong size");
  }
  FunctionJetFamily out = fam;
  for (auto& m : out.members) {
    m.linear = a.transpose() * m.linear;
    m.quad = a.transpose() * m.quad * a;
    m.quad = 0.5 * (m.quad + m.quad.transpose()).eval();
  }
  return out;
}

StabilityProbe perturbation_stability_probe(const std::vector<Eigen::MatrixXd>& forms,
                                            const std::vector<double>& epsilons, int trials, std::uint64_t seed,
                                            const PositivityOptions& opt) {
  StabilityProbe probe;
  const PositivityCertificate base = certify_positivity<double>(forms, opt);
  if (base.verdict != Verdict::positively_defined) {
    throw std::invalid_argument("perturbation_stability_probe: the forms are not certified positive");
  }
  probe.v_constant = base.v_constant;
  probe.w_constant = 1.0;
  const Eigen::Index n = forms[0].rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  // The same perturbation directions are reused for every epsilon.
  std::vector<std::vector<Eigen::MatrixXd>> dirs;
  for (int t = 0; t < trials; ++t) {
    std::vector<Eigen::MatrixXd> ps;
    for (std::size_t a = 0; a < forms.size(); ++a) {
      Eigen::MatrixXd p(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) p(i, j) = normal(rng);
      }
      p = 0.5 * (p + p.transpose()).eval();
      const double norm = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p).eigenvalues().cwiseAbs().maxCoeff();
      ps.push_back(norm > 0 ? Eigen::MatrixXd(p / norm) : p);
    }
    dirs.push_back(ps);
  }
  const double threshold = 0.9 * probe.v_constant / probe.w_constant;
  for (const double eps : epsilons) {
    StabilityRow row;
    row.epsilon = eps;
    row.trials = trials;
    row.below_threshold = eps < threshold;
    for (const auto& ps : dirs) {
      std::vector<Eigen::MatrixXd> perturbed;
      for (std::size_t a = 0; a < forms.size(); ++a) perturbed.push_back(forms[a] + eps * ps[a]);
      const PositivityCertificate c = certify_positivity<double>(perturbed, opt);
      if (c.verdict == Verdict::positively_defined) {
        ++row.certified;
      } else if (c.verdict == Verdict::not_positively_defined) {
        ++row.failed;
      } else {
        ++row.inconclusive;
      }
    }
    if (row.certified < trials) {
      if (probe.first_failure < 0 || eps < probe.first_failure) probe.first_failure = eps;
      if (row.below_threshold) probe.stable_below_threshold = false;
    }
    probe.rows.push_back(row);
  }
  return probe;
}

}  // namespace cylcert
