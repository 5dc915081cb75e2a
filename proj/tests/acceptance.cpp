// Acceptance checks: one PASS/FAIL line per criterion.

#include "cylcert/certify.hpp"
#include "cylcert/chirality.hpp"
#include "cylcert/linalg.hpp"
#include "cylcert/search.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace cylcert;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, double time_limit, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0 && secs > time_limit) {
    o.pass = false;
    o.detail += " [over time limit]";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Eigen::VectorXd normal_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

Outcome base_values() {
  const LineConfiguration o6 = build_O6();
  double err1 = 0, err2 = 0;
  int n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      const double d = line_distance(o6[i], o6[j]);
      if (o6.is_declared_parallel(i, j)) {
        err2 = std::max(err2, std::abs(d - 2));
        ++n2;
      } else {
        err1 = std::max(err1, std::abs(d - 1));
        ++n1;
      }
    }
  }
  const double dd = min_distance(o6, false).value, dt = min_distance(o6, true).value;
  const bool ok = n1 == 12 && n2 == 3 && err1 <= 1e-12 && err2 <= 1e-12 && std::abs(dd - 1) <= 1e-12 &&
                  std::abs(dt - 1) <= 1e-12;
  return {ok, fmt("12 distances at 1 (max err %.1e), 3 at 2 (max err %.1e)", err1, err2)};
}

Outcome first_differentials() {
  std::mt19937_64 rng(2024);
  const LineConfiguration o6 = build_O6();
  double worst = 0, worst_sum = 0, worst_fd_sum = 0;
  bool fd_sums_ok = true;
  for (int k = 0; k < 1000; ++k) {
    const PerturbationParams p(normal_vector(rng, 15));
    const JetTable cf = first_order_closed_form(p);
    const JetTable fd = finite_difference_jets(o6, p, 1);
    worst = std::max(worst, (cf.order1 - fd.order1).cwiseAbs().maxCoeff());
    for (int g = 0; g < 3; ++g) {
      worst_sum = std::max(worst_sum, std::abs(cf.order1.segment(4 * g, 4).sum()));
      // The finite-difference sums vanish up to their truncation error.
      const double fd_sum = std::abs(fd.order1.segment(4 * g, 4).sum());
      worst_fd_sum = std::max(worst_fd_sum, fd_sum);
      fd_sums_ok = fd_sums_ok && fd_sum <= 1e-8 + 2 * fd.error1.segment(4 * g, 4).sum();
    }
  }
  return {worst <= 1e-7 && worst_sum <= 1e-8 && fd_sums_ok,
          fmt("1000 perturbations, max |closed - fd| = %.1e, max |group sum| = %.1e (fd: %.1e)", worst, worst_sum,
              worst_fd_sum)};
}

Outcome kernel_dimensions() {
  const FunctionJetFamily fam = o6_jet_family();
  const int rank = numerical_rank(fam.linear_matrix());
  const auto e = kernel_subspace(fam).cols();
  const auto deps = convex_dependencies(fam);
  bool quarters = deps.size() == 3;
  for (const auto& d : deps) {
    int count = 0, group = -1;
    for (Eigen::Index u = 0; u < d.mu.size(); ++u) {
      if (d.mu[u] == 0.0) continue;
      ++count;
      const int gu = fam.group_of[static_cast<std::size_t>(u)];
      if (group < 0) group = gu;
      quarters = quarters && std::abs(d.mu[u] - 0.25) <= 1e-9 && gu == group;
    }
    quarters = quarters && d.convex && count == 4;
  }
  return {rank == 9 && e == 6 && quarters,
          fmt("rank %.0f, dim E = %.0f, %.0f dependencies, all (1/4, 1/4, 1/4, 1/4) on one group: ", rank,
              static_cast<double>(e), static_cast<double>(deps.size())) +
              (quarters ? "yes" : "no")};
}

Outcome second_order_forms() {
  const FunctionJetFamily fam = o6_jet_family();
  const Eigen::MatrixXd lift = e_lift_matrix();
  double worst = 0;
  bool ranks = true;
  for (int a = 0; a < 3; ++a) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(12);
    mu.segment(4 * a, 4).setConstant(0.25);
    const Eigen::MatrixXd gram = 2 * restrict_form(fam, mu, lift).gram;
    const Eigen::MatrixXd ref =
        oracle::polarize([a](const Eigen::VectorXd& x) { return oracle::upsilon(x)[static_cast<std::size_t>(a)]; }, 6);
    worst = std::max(worst, (gram - ref).cwiseAbs().maxCoeff());
    ranks = ranks && numerical_rank(gram) == 3;
  }
  return {worst <= 1e-9 && ranks, fmt("max coefficient error %.1e, ranks 3 3 3: ", worst) + (ranks ? "yes" : "no")};
}

Outcome family_positivity() {
  const auto forms = o6_negated_forms();
  const PositivityCertificate c = certify_family_positivity(forms);
  // Independent check in the (omega, c) coordinates: no unit point
  // satisfies all three inequalities.
  std::mt19937_64 rng(5);
  double min_of_max = std::numeric_limits<double>::infinity();
  for (long s = 0; s < 1000000; ++s) {
    const Eigen::VectorXd x = normal_vector(rng, 6).normalized();
    const auto u = oracle::upsilon(x);
    min_of_max = std::min(min_of_max, std::max({-u[0], -u[1], -u[2]}));
  }
  const double sampled_same_basis = oracle::sampled_min_of_max(forms, 200000, 6);
  const bool certified = c.verdict == Verdict::positively_defined && c.v_constant > 0;
  const bool agree = certified == (min_of_max > 1e-9) && sampled_same_basis >= c.v_constant;
  return {certified && agree && c.work_log.cells_processed <= 1000000,
          to_string(c.verdict) + fmt(", v = %.4g in %.0f cells; sampling: min max(-U) = %.3g over 1e6 points", c.v_constant,
                                     static_cast<double>(c.work_log.cells_processed), min_of_max)};
}

Outcome sylvester() {
  const SylvesterScan scan = sylvester_scan(500, 0.01, 10.0);
  // Independent pass over the same grid with a Cholesky test.
  long positive = 0;
  double max_disc = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 500; ++i) {
    const double alpha = 0.01 * std::pow(1000.0, i / 499.0);
    for (int j = 0; j < 500; ++j) {
      const double beta = 0.01 * std::pow(1000.0, j / 499.0);
      if (oracle::combination_gram(alpha, beta).llt().info() == Eigen::Success) ++positive;
      if (i == 0 && beta > 1) max_disc = std::max(max_disc, (1 - 3 * beta) * (1 - 3 * beta) - 4 * beta * beta * beta);
    }
  }
  return {scan.points == 250000 && scan.holds() && positive == 0 && max_disc < 0,
          fmt("%.0f points, %.0f positive (Cholesky: %.0f), max discriminant for beta > 1: %.3g",
              static_cast<double>(scan.points), static_cast<double>(scan.positive_points), static_cast<double>(positive),
              scan.max_discriminant)};
}

Outcome lq2b() {
  const FunctionJetFamily fam = o6_jet_family();
  const Lq2bReport rep = check_lq2b_conditions(fam);
  bool ok = rep.a_pass && rep.b_pass && rep.c_pass && rep.verdict == "strict_local_max";
  std::vector<int> owner(15, -1);
  for (const auto& g : rep.groups) {
    for (const int v : g.support) owner[static_cast<std::size_t>(v)] = g.group;
  }
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n;
  int kept = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // Each group's variables mix only among themselves; the remaining
    // variables may pick up anything.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(15, 15);
    for (int i = 0; i < 15; ++i) {
      for (int j = 0; j < 15; ++j) {
        const int oi = owner[static_cast<std::size_t>(i)], oj = owner[static_cast<std::size_t>(j)];
        if (i == j) {
          a(i, j) = 1.0 + 0.3 * n(rng);
        } else if (oi < 0 || oi == oj) {
          a(i, j) = 0.3 * n(rng);
        }
      }
    }
    if (std::abs(a.determinant()) < 1e-3) a += Eigen::MatrixXd::Identity(15, 15);
    const Lq2bReport r = check_lq2b_conditions(change_variables(fam, a));
    if (r.verdict == "strict_local_max" && r.a_pass && r.c_pass) ++kept;
  }
  ok = ok && kept == 20;
  return {ok, "A " + std::string(rep.a_pass ? "pass" : "fail") + ", B " + (rep.b_pass ? "pass" : "fail") + ", C " +
                  (rep.c_pass ? "pass" : "fail") + ", verdict " + rep.verdict +
                  fmt("; unchanged under %.0f/20 changes of variables", kept)};
}

Outcome decay() {
  DecayOptions opt;
  opt.directions = 100;
  const DecayReport rep = decay_probe(o6_chart(), kernel_subspace(o6_jet_family()), opt);
  const double lo_e = rep.min_exponent(true), hi_e = rep.max_exponent(true);
  const double lo_g = rep.min_exponent(false), hi_g = rep.max_exponent(false);
  return {lo_e >= 1.9 && hi_e <= 2.1 && lo_g >= 0.9 && hi_g <= 1.1,
          fmt("E: [%.4f, %.4f], off E: [%.4f, %.4f]", lo_e, hi_e, lo_g, hi_g)};
}

Outcome saddle_vs_max() {
  const UnlockSetup o = default_unlock_setup(build_O6());
  UnlockOptions oo = o.options;
  oo.seeds = 64;
  const UnlockResult ro = unlock_search(o.chart, oo);
  const UnlockSetup c = default_unlock_setup(build_C6());
  const UnlockResult rc = unlock_search(c.chart, c.options);
  // The improving C6 deformation must really separate every pair.
  const LineConfiguration moved = c.chart.apply(rc.best_direction, rc.best_t);
  const double d = min_distance(moved, false).value;
  return {ro.best_gain <= 1e-9 && rc.best_gain > 1e-4 && d > 1.0 + 1e-4,
          fmt("O6 best gain %.3g, C6 best gain %.3g (D after deformation %.6f)", ro.best_gain, rc.best_gain, d)};
}

Outcome chirality() {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n;
  auto line = [&] { return OrientedLine<double>(Vec3d(n(rng), n(rng), n(rng)), oracle::random_unit(rng)); };
  int triples = 0, bad = 0;
  for (int k = 0; k < 2000; ++k) {
    const std::array<OrientedLine<double>, 3> l{line(), line(), line()};
    const LineTriple t(l);
    if (!t.is_generic()) continue;
    ++triples;
    const int s = triple_sign(t);
    for (int mask = 1; mask < 8; ++mask) {
      const LineTriple f({(mask & 1) ? l[0].reversed() : l[0], (mask & 2) ? l[1].reversed() : l[1],
                          (mask & 4) ? l[2].reversed() : l[2]});
      if (triple_sign(f) != s) ++bad;
    }
    const Mat3d r = Eigen::AngleAxisd(3 * n(rng), oracle::random_unit(rng)).toRotationMatrix();
    if (triple_sign(LineTriple({transform_line(r, l[0]), transform_line(r, l[1]), transform_line(r, l[2])})) != s) ++bad;
    const Mat3d m = -Mat3d::Identity();
    if (triple_sign(LineTriple({transform_line(m, l[0]), transform_line(m, l[1]), transform_line(m, l[2])})) != -s) ++bad;
  }
  int census_bad = 0;
  for (int k = 0; k < 20; ++k) {
    std::vector<TangentLine<double>> lines;
    std::vector<std::string> labels;
    for (int i = 0; i < 6; ++i) {
      const auto [x, d] = oracle::random_tangent(rng);
      lines.emplace_back(x, d);
      labels.push_back("x" + std::to_string(i));
    }
    const LineConfiguration cfg(lines, labels);
    const TripleCensus a = triple_census(cfg);
    const TripleCensus b = triple_census(apply(central_reflection(), cfg));
    if (a.n_plus != b.n_minus || a.n_minus != b.n_plus) ++census_bad;
  }
  const TripleCensus o = triple_census(build_O6());
  const TripleCensus om = triple_census(apply(central_reflection(), build_O6()));
  if (o.n_plus != om.n_minus || o.n_minus != om.n_plus) ++census_bad;
  return {bad == 0 && census_bad == 0 && triples > 1000,
          fmt("%.0f generic triples, %.0f sign violations, %.0f census mismatches", triples, bad, census_bad)};
}

}  // namespace

int main() {
  run(1, 1.0, base_values);
  run(2, 30.0, first_differentials);
  run(3, 0, kernel_dimensions);
  run(4, 0, second_order_forms);
  run(5, 300.0, family_positivity);
  run(6, 10.0, sylvester);
  run(7, 0, lq2b);
  run(8, 0, decay);
  run(9, 120.0, saddle_vs_max);
  run(10, 10.0, chirality);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
