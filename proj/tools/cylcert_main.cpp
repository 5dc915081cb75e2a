// cylcert: command-line front end.
//
//   cylcert build o6 --out o6.json
//   cylcert distances o6.json --skip-parallel
//   cylcert certify o6.json --budget 1000000 --out report.json
//
// Tables go to stdout; --out receives the JSON report (or, for build, the
// configuration file).

#include "cylcert/certify.hpp"
#include "cylcert/chirality.hpp"
#include "cylcert/config_io.hpp"
#include "cylcert/linalg.hpp"
#include "cylcert/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace cylcert;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitInternal = 4;

struct Globals {
  std::uint64_t seed = 0;
  long budget = 1'000'000;
  std::string precision = "double";
  std::string out;
};

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os) const {
    std::vector<std::size_t> w;
    for (const auto& r : rows_) {
      if (w.size() < r.size()) w.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      for (std::size_t i = 0; i < rows_[k].size(); ++i) {
        os << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << rows_[k][i];
      }
      os << "\n";
      if (k == 0) {
        std::size_t total = 0;
        for (const auto x : w) total += x + 2;
        os << std::string(total > 2 ? total - 2 : 0, '-') << "\n";
      }
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string num(double v, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json mat_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

// Infinite or NaN values become null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Loaded {
  LineConfiguration cfg;
  std::string digest;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return {parse_config(text), digest(text)};
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.location(), std::string(e.what()).substr(e.location().empty() ? 0 : e.location().size() + 2));
  }
}

Precision precision_of(const Globals& g) {
  return g.precision == "extended" ? Precision::extended : Precision::double_precision;
}

Json report_header(const std::string& command, const Globals& g, const std::string& input_digest) {
  Json r;
  r["command"] = command;
  r["input_digest"] = input_digest;
  r["seed"] = g.seed;
  r["budget"] = g.budget;
  r["precision"] = g.precision;
  return r;
}

void emit(Json report, const Globals& g, std::chrono::steady_clock::time_point start) {
  report["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (g.out.empty()) return;
  std::ofstream out(g.out);
  if (!out) throw std::runtime_error("cannot write " + g.out);
  out << report.dump(2) << "\n";
}

Json pairs_json(const LineConfiguration& cfg, const std::vector<IndexPair>& pairs) {
  Json a = Json::array();
  for (const auto& p : pairs) a.push_back({cfg.labels()[p.first], cfg.labels()[p.second]});
  return a;
}

Json certificate_json(const PositivityCertificate& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["v_constant"] = finite_or_null(c.v_constant);
  j["witness"] = vec_json(c.witness);
  j["work_log"] = {{"cells_processed", c.work_log.cells_processed},
                   {"cells_discharged", c.work_log.cells_discharged},
                   {"cells_split", c.work_log.cells_split},
                   {"max_depth", c.work_log.max_depth},
                   {"sample_points", c.work_log.sample_points},
                   {"combinations", c.work_log.combinations},
                   {"upper_bound", finite_or_null(c.work_log.upper_bound)}};
  return j;
}

Json jet_json(const JetTable& t) {
  Json j;
  j["source"] = to_string(t.source);
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    Json r = {{"pair", t.pairs[i].label}, {"group", t.pairs[i].group}};
    if (t.has_order1) r["order1"] = t.order1[k];
    if (t.has_order2) r["order2"] = t.order2[k];
    rows.push_back(r);
  }
  j["entries"] = rows;
  if (!t.flagged.empty()) j["flagged"] = t.flagged;
  return j;
}

std::string polynomial(const Eigen::MatrixXd& g, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = i; j < g.cols(); ++j) {
      const double c = i == j ? g(i, i) : 2 * g(i, j);
      if (std::abs(c) < 1e-9) continue;
      const double r = std::round(c * 1e6) / 1e6;
      os << (first ? (r < 0 ? "-" : "") : (r < 0 ? " - " : " + "));
      if (std::abs(std::abs(r) - 1) > 1e-12) os << num(std::abs(r), 6) << "*";
      os << names[static_cast<std::size_t>(i)] << (i == j ? "^2" : "*" + names[static_cast<std::size_t>(j)]);
      first = false;
    }
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------- commands

int cmd_build(const std::string& name, const Globals& g) {
  LineConfiguration cfg;
  if (name == "o6") {
    cfg = build_O6();
  } else if (name == "c6") {
    cfg = build_C6();
  } else {
    throw ConfigError("", "unknown configuration '" + name + "' (expected o6 or c6)");
  }
  if (g.out.empty()) {
    std::cout << serialize_config(cfg);
  } else {
    write_config(cfg, g.out);
    std::cout << "wrote " << g.out << " (" << cfg.size() << " lines, " << cfg.parallel_pairs().size()
              << " parallel pairs)\n";
  }
  return kExitOk;
}

int cmd_distances(const std::string& path, bool skip_parallel, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(path);
  const auto& cfg = in.cfg;
  const auto n = cfg.size();
  Eigen::MatrixXd table(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (precision_of(g) == Precision::extended) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const long double d = line_distance(cfg[i].cast<long double>(), cfg[j].cast<long double>());
        table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(d);
      }
    }
  } else {
    table = distance_table(cfg);
  }
  std::vector<std::string> header{""};
  for (const auto& l : cfg.labels()) header.push_back(l);
  Table t(header);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{cfg.labels()[i]};
    for (std::size_t j = 0; j < n; ++j) row.push_back(num(table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 12));
    t.add(row);
  }
  t.print(std::cout);
  const MinDistance md = min_distance(cfg, skip_parallel);
  std::cout << "\n" << (skip_parallel ? "D~" : "D") << " = " << num(md.value, 15) << " attained by "
            << md.minimizers.size() << " pair(s):";
  for (const auto& p : md.minimizers) std::cout << " (" << cfg.labels()[p.first] << "," << cfg.labels()[p.second] << ")";
  std::cout << "\nequivalent cylinder radius r = " << num(radius_from_distance(md.value), 15) << "\n";

  Json r = report_header("distances", g, in.digest);
  r["results"] = {{"labels", cfg.labels()},
                  {"distances", mat_json(table)},
                  {"skip_parallel", skip_parallel},
                  {"min_distance", md.value},
                  {"minimizers", pairs_json(cfg, md.minimizers)},
                  {"radius", radius_from_distance(md.value)}};
  emit(r, g, start);
  return kExitOk;
}

int cmd_jets(const std::string& path, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(path);
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> normal;
  Json r = report_header("jets", g, in.digest);
  if (is_canonical_o6(in.cfg)) {
    Eigen::VectorXd v(PerturbationParams::kFree);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    const PerturbationParams p(v);
    const JetTable cf = first_order_closed_form(p);
    const JetTable se = series_jets(o6_chart(in.cfg), p.vector(), o6_pairs());
    const JetTable f1 = finite_difference_jets(in.cfg, p, 1);
    const JetTable f2 = finite_difference_jets(in.cfg, p, 2);
    std::cout << "random perturbation (seed " << g.seed << "):";
    for (std::size_t i = 0; i < PerturbationParams::names().size(); ++i) {
      std::cout << " " << PerturbationParams::names()[i] << "=" << num(v[static_cast<Eigen::Index>(i)], 4);
    }
    std::cout << "\n\n";
    Table t({"pair", "group", "[d2]1 closed", "[d2]1 series", "[d2]1 fd", "[d2]2 series", "[d2]2 fd"});
    for (std::size_t i = 0; i < cf.pairs.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      t.add({cf.pairs[i].label, std::to_string(cf.pairs[i].group + 1), num(cf.order1[k]), num(se.order1[k]),
             num(f1.order1[k]), num(se.order2[k]), num(f2.order2[k])});
    }
    t.print(std::cout);
    std::cout << "\ngroup sums of [d2]1:";
    for (int gi = 0; gi < 3; ++gi) std::cout << " " << num(cf.order1.segment(4 * gi, 4).sum());
    std::cout << "\nmax |closed - fd| order 1: " << num((cf.order1 - f1.order1).cwiseAbs().maxCoeff(), 3)
              << ", max |series - fd| order 2: " << num((se.order2 - f2.order2).cwiseAbs().maxCoeff(), 3) << "\n";
    r["results"] = {{"parameters", vec_json(v)},
                    {"parameter_names", PerturbationParams::names()},
                    {"closed_form", jet_json(cf)},
                    {"series", jet_json(se)},
                    {"finite_difference_order1", jet_json(f1)},
                    {"finite_difference_order2", jet_json(f2)}};
  } else {
    const RotationChart chart = local_rotation_chart(in.cfg);
    Eigen::VectorXd v(chart.n_vars());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    std::vector<LabeledPair> pairs;
    for (const auto& lp : all_pairs(in.cfg, true)) {
      if (std::abs(in.cfg[lp.pair.first].direction().dot(in.cfg[lp.pair.second].direction())) < 1.0 - kParallelThreshold) {
        pairs.push_back(lp);
      }
    }
    const JetTable se = series_jets(chart, v, pairs);
    const JetTable f1 = finite_difference_jets(chart, v, pairs, 1);
    const JetTable f2 = finite_difference_jets(chart, v, pairs, 2);
    Table t({"pair", "[d2]1 series", "[d2]1 fd", "[d2]2 series", "[d2]2 fd"});
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      t.add({pairs[i].label, num(se.order1[k]), num(f1.order1[k]), num(se.order2[k]), num(f2.order2[k])});
    }
    t.print(std::cout);
    r["results"] = {{"parameters", vec_json(v)},
                    {"parameter_names", chart.var_names()},
                    {"series", jet_json(se)},
                    {"finite_difference_order1", jet_json(f1)},
                    {"finite_difference_order2", jet_json(f2)}};
  }
  emit(r, g, start);
  return kExitOk;
}

void print_lq2b(const Lq2bReport& rep, const FunctionJetFamily& fam) {
  std::cout << "condition (A): " << (rep.a_pass ? "pass" : "fail") << "\n";
  for (const auto& gc : rep.groups) {
    std::cout << "  group " << gc.group + 1 << ": left kernel dim " << gc.kernel_dim << ", convex "
              << (gc.convex ? "yes" : "no") << ", variables {";
    for (std::size_t i = 0; i < gc.support.size(); ++i) {
      std::cout << (i ? ", " : "") << fam.var_names[static_cast<std::size_t>(gc.support[i])];
    }
    std::cout << "}\n";
  }
  std::cout << "condition (B): " << (rep.b_pass ? "pass" : "fail") << "\n";
  for (const auto& m : rep.b_message) std::cout << "  " << m << "\n";
  std::cout << "condition (C): " << (rep.c_pass ? "pass" : "fail") << " (" << to_string(rep.c.verdict)
            << ", v = " << num(rep.c.v_constant, 6) << ", " << rep.c.work_log.cells_processed << " cells)\n";
}

Json lq2b_json(const Lq2bReport& rep, const FunctionJetFamily& fam) {
  Json groups = Json::array();
  for (const auto& gc : rep.groups) {
    Json vars = Json::array();
    for (const int s : gc.support) vars.push_back(fam.var_names[static_cast<std::size_t>(s)]);
    groups.push_back({{"group", gc.group},
                      {"kernel_dim", gc.kernel_dim},
                      {"convex", gc.convex},
                      {"lambda", vec_json(gc.lambda)},
                      {"variables", vars}});
  }
  return {{"A", rep.a_pass ? "pass" : "fail"},
          {"groups", groups},
          {"B", rep.b_pass ? "pass" : "fail"},
          {"B_conflicts", rep.b_message},
          {"E_dim", rep.e_dim},
          {"C", certificate_json(rep.c)},
          {"verdict", rep.verdict}};
}

int certify_o6(const Loaded& in, const Globals& g, Json& r) {
  PositivityOptions opt;
  opt.budget = g.budget;
  opt.seed = g.seed;
  const FunctionJetFamily fam = o6_jet_family();
  const Eigen::MatrixXd l = fam.linear_matrix();
  const int rank = numerical_rank(l);
  const Eigen::MatrixXd e = kernel_subspace(fam);
  const auto deps = convex_dependencies(fam);

  std::cout << "linear parts: " << l.rows() << " x " << l.cols() << ", rank " << rank << ", dim E = " << e.cols()
            << "\n\ndependencies:\n";
  Json deps_json = Json::array();
  for (const auto& d : deps) {
    std::cout << "  " << (d.convex ? "convex  " : "signed  ");
    for (Eigen::Index i = 0; i < d.mu.size(); ++i) {
      if (d.mu[i] != 0.0) std::cout << " " << num(d.mu[i], 6) << "*[" << fam.members[static_cast<std::size_t>(i)].label << "]";
    }
    std::cout << "\n";
    deps_json.push_back({{"mu", vec_json(d.mu)}, {"convex", d.convex}});
  }

  const std::vector<std::string> coords{"w", "c1-", "c2+", "c2-", "c3+", "c3-"};
  const Eigen::MatrixXd lift = e_lift_matrix();
  std::cout << "\nsecond-order forms on E (restricted group means, times 2):\n";
  Json ups = Json::array();
  for (int a = 0; a < 3; ++a) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(fam.size());
    for (Eigen::Index u = 0; u < fam.size(); ++u) {
      if (fam.group_of[static_cast<std::size_t>(u)] == a) mu[u] = 0.25;
    }
    const Eigen::MatrixXd gram = 2 * restrict_form(fam, mu, lift).gram;
    const std::string poly = polynomial(gram, coords);
    std::cout << "  U" << a + 1 << " = " << poly << "   (rank " << numerical_rank(gram) << ")\n";
    ups.push_back({{"polynomial", poly}, {"gram", mat_json(gram)}, {"rank", numerical_rank(gram)}});
  }

  const Lq2bReport rep = check_lq2b_conditions(fam, opt, precision_of(g));
  std::cout << "\n";
  print_lq2b(rep, fam);

  const SylvesterScan scan = sylvester_scan();
  std::cout << "\nconvex combinations -(U1~ + a U2 + b U3): " << scan.points << " grid points, "
            << scan.positive_points << " positive definite; order-5 minor positive at " << scan.m_minor_positive
            << " points with b > 1\n";

  std::cout << "\nverdict: " << rep.verdict << "\n";
  r["results"] = {{"configuration", "O6"},
                  {"jets", jet_json(series_jets(o6_chart(in.cfg), Eigen::VectorXd::Ones(15), o6_pairs()))},
                  {"linear_rank", rank},
                  {"E_dim", e.cols()},
                  {"E_basis", mat_json(e)},
                  {"dependencies", deps_json},
                  {"upsilon", ups},
                  {"certificate", certificate_json(rep.c)},
                  {"sylvester_scan",
                   {{"grid", scan.grid},
                    {"points", scan.points},
                    {"positive_points", scan.positive_points},
                    {"beta_above_one", scan.beta_above_one},
                    {"m_minor_positive", scan.m_minor_positive},
                    {"max_discriminant", scan.max_discriminant}}},
                  {"lq2b", lq2b_json(rep, fam)},
                  {"verdict", rep.verdict}};
  return rep.verdict == "inconclusive" ? kExitInconclusive : kExitOk;
}

Json unlock_json(const UnlockResult& u) {
  return {{"base_value", u.base_value},
          {"best_gain", u.best_gain},
          {"best_t", u.best_t},
          {"best_direction", vec_json(u.best_direction)},
          {"evaluations", u.evaluations},
          {"symmetric_subspaces", u.subspaces}};
}

std::string analyze_jets(const RotationChart& chart, const std::vector<LabeledPair>& active, const Globals& g,
                         Json& deps_json, Json& lq, int& e_dim);

int certify_generic(const Loaded& in, const Globals& g, Json& r) {
  const auto& cfg = in.cfg;
  const MinDistance md = min_distance(cfg, false);
  std::vector<LabeledPair> active;
  for (const auto& p : md.minimizers) {
    if (cfg.is_declared_parallel(p.first, p.second)) continue;
    active.push_back({p, cfg.labels()[p.first] + "," + cfg.labels()[p.second], 0});
  }
  const RotationChart chart = local_rotation_chart(cfg);
  std::cout << "D = " << num(md.value, 15) << ", " << active.size() << " active pair(s), " << chart.n_vars()
            << " chart variables\n";

  const bool smooth = std::none_of(active.begin(), active.end(), [&](const LabeledPair& lp) {
    return std::abs(cfg[lp.pair.first].direction().dot(cfg[lp.pair.second].direction())) >= 1.0 - kParallelThreshold;
  });
  Json deps_json = Json::array();
  Json lq = nullptr;
  std::string verdict = "undetermined";
  int e_dim = -1;
  if (smooth) {
    verdict = analyze_jets(chart, active, g, deps_json, lq, e_dim);
  } else {
    std::cout << "active pairs include parallel lines; jet analysis skipped\n";
  }
  const UnlockSetup setup = default_unlock_setup(cfg);
  UnlockOptions uo = setup.options;
  uo.seed = g.seed;
  const UnlockResult u = unlock_search(setup.chart, uo);
  std::cout << "unlock search: best gain " << num(u.best_gain, 6) << " at t = " << num(u.best_t, 4) << "\n";
  if (u.best_gain > 1e-9) verdict = "saddle_candidate";
  std::cout << "\nverdict: " << verdict << "\n";

  r["results"] = {{"configuration", "generic"},
                  {"min_distance", md.value},
                  {"active_pairs", pairs_json(cfg, md.minimizers)},
                  {"smooth", smooth},
                  {"dependencies", deps_json},
                  {"E_dim", e_dim < 0 ? Json(nullptr) : Json(e_dim)},
                  {"lq2b", lq},
                  {"unlock", unlock_json(u)},
                  {"verdict", verdict}};
  return verdict == "inconclusive" ? kExitInconclusive : kExitOk;
}

std::string analyze_jets(const RotationChart& chart, const std::vector<LabeledPair>& active, const Globals& g,
                         Json& deps_json, Json& lq, int& e_dim) {
  PositivityOptions opt;
  opt.budget = g.budget;
  opt.seed = g.seed;
  FunctionJetFamily fam = jet_family(chart, active);
  const auto deps = convex_dependencies(fam);
  // Members outside every convex dependency are dropped: a minimum over
  // fewer members is an upper bound for the full minimum.
  std::vector<int> group(static_cast<std::size_t>(fam.size()), -1);
  int ng = 0;
  for (const auto& d : deps) {
    if (!d.convex) continue;
    for (Eigen::Index u = 0; u < d.mu.size(); ++u) {
      if (d.mu[u] > 0 && group[static_cast<std::size_t>(u)] < 0) group[static_cast<std::size_t>(u)] = ng;
    }
    ++ng;
  }
  FunctionJetFamily sub;
  sub.var_names = fam.var_names;
  for (std::size_t u = 0; u < fam.members.size(); ++u) {
    if (group[u] < 0) continue;
    sub.members.push_back(fam.members[u]);
    sub.group_of.push_back(group[u]);
  }
  std::cout << "dependencies: " << deps.size() << " (" << ng << " convex), dim E = " << kernel_subspace(fam).cols()
            << "\n";

  e_dim = static_cast<int>(kernel_subspace(fam).cols());
  for (const auto& d : deps) deps_json.push_back({{"mu", vec_json(d.mu)}, {"convex", d.convex}});
  if (sub.members.empty()) return "undetermined";
  const Lq2bReport rep = check_lq2b_conditions(sub, opt, precision_of(g));
  print_lq2b(rep, sub);
  lq = lq2b_json(rep, sub);
  return rep.verdict;
}

int cmd_certify(const std::string& path, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(path);
  Json r = report_header("certify", g, in.digest);
  const int code = is_canonical_o6(in.cfg) ? certify_o6(in, g, r) : certify_generic(in, g, r);
  emit(r, g, start);
  return code;
}

int cmd_chirality(const std::string& path, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(path);
  const TripleCensus c = triple_census(in.cfg);
  Table t({"triple", "sign", "note"});
  Json rows = Json::array();
  for (const auto& e : c.triples) {
    const std::string name = in.cfg.labels()[e.indices[0]] + " " + in.cfg.labels()[e.indices[1]] + " " +
                             in.cfg.labels()[e.indices[2]];
    t.add({name, e.sign > 0 ? "+" : e.sign < 0 ? "-" : "0", e.reason});
    rows.push_back({{"labels", {in.cfg.labels()[e.indices[0]], in.cfg.labels()[e.indices[1]], in.cfg.labels()[e.indices[2]]}},
                    {"sign", e.sign},
                    {"reason", e.reason}});
  }
  if (!c.triples.empty()) {
    t.print(std::cout);
    std::cout << "\n";
  }
  std::cout << "n_plus = " << c.n_plus << ", n_minus = " << c.n_minus << ", n_degenerate = " << c.n_degenerate << "\n";
  Json r = report_header("chirality", g, in.digest);
  r["results"] = {{"n_plus", c.n_plus}, {"n_minus", c.n_minus}, {"n_degenerate", c.n_degenerate}, {"triples", rows}};
  emit(r, g, start);
  return kExitOk;
}

int cmd_decay(const std::string& path, int directions, const std::vector<double>& ts, const std::string& csv,
              const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(path);
  DecayOptions opt;
  opt.directions = directions;
  if (!ts.empty()) opt.ts = ts;
  opt.seed = g.seed;
  if (opt.ts.size() < 3) throw std::invalid_argument("need ≥ 3 scales");
  DecayReport rep;
  if (is_canonical_o6(in.cfg)) {
    opt.skip_parallel = true;
    rep = decay_probe(o6_chart(in.cfg), kernel_subspace(o6_jet_family()), opt);
  } else {
    opt.skip_parallel = false;
    rep = decay_probe(local_rotation_chart(in.cfg), Eigen::MatrixXd(), opt);
  }
  Table t({"set", "directions", "min exponent", "max exponent"});
  for (const bool in_e : {true, false}) {
    const auto count = std::count_if(rep.fits.begin(), rep.fits.end(), [&](const DecayFit& f) { return f.in_e == in_e; });
    if (count == 0) continue;
    t.add({in_e ? "in E" : "generic", std::to_string(count), num(rep.min_exponent(in_e), 6), num(rep.max_exponent(in_e), 6)});
  }
  t.print(std::cout);
  if (rep.c_u > 0) std::cout << "\nquadratic decay constants on E: c_d = " << num(rep.c_d, 6) << ", c_u = " << num(rep.c_u, 6) << "\n";
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv);
    out << "direction,in_e,t,decay\n";
    for (std::size_t i = 0; i < rep.fits.size(); ++i) {
      for (std::size_t k = 0; k < rep.ts.size(); ++k) {
        out << i << "," << (rep.fits[i].in_e ? 1 : 0) << "," << format_double(rep.ts[k]) << ","
            << format_double(rep.fits[i].decay[k]) << "\n";
      }
    }
  }
  Json fits = Json::array();
  for (const auto& f : rep.fits) fits.push_back({{"in_e", f.in_e}, {"exponent", finite_or_null(f.exponent)}, {"decay", f.decay}});
  Json r = report_header("decay-probe", g, in.digest);
  r["results"] = {{"ts", rep.ts}, {"fits", fits}, {"c_d", rep.c_d}, {"c_u", rep.c_u}};
  emit(r, g, start);
  return kExitOk;
}

int cmd_search(const std::string& path, int seeds, int iters, double t_max, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(path);
  UnlockSetup setup = default_unlock_setup(in.cfg);
  if (seeds >= 0) setup.options.seeds = seeds;
  if (iters > 0) setup.options.iters = iters;
  if (t_max > 0) setup.options.t_max = t_max;
  setup.options.seed = g.seed;
  const UnlockResult u = unlock_search(setup.chart, setup.options);
  std::cout << (setup.options.skip_parallel ? "D~" : "D") << " base value " << num(u.base_value, 15) << "\n"
            << "best gain " << num(u.best_gain, 6) << " at t = " << num(u.best_t, 4) << " after " << u.evaluations
            << " evaluations\n"
            << (u.best_gain > 1e-9 ? "an unlocking direction was found\n" : "no unlocking direction found\n");
  Json r = report_header("search", g, in.digest);
  r["results"] = unlock_json(u);
  emit(r, g, start);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cylcert: tangent-line configurations, minimax distances and rigidity certificates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--budget", g.budget, "Cell budget of the positivity certifier")->capture_default_str();
  app.add_option("--precision", g.precision, "Arithmetic for certification and distances")
      ->check(CLI::IsMember({"double", "extended"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Report (or configuration) output path");

  std::string name, path;
  bool skip_parallel = false;
  int directions = 100, seeds = -1, iters = 0;
  double t_max = 0;
  std::vector<double> ts;
  std::string csv;

  auto* build = app.add_subcommand("build", "Write a canonical configuration (o6 or c6)");
  build->add_option("name", name)->required();
  auto* dist = app.add_subcommand("distances", "Pairwise distances and D / D~");
  dist->add_option("config", path)->required();
  dist->add_flag("--skip-parallel", skip_parallel, "Leave out the declared parallel pairs (D~)");
  auto* jets = app.add_subcommand("jets", "Taylor coefficients of squared distances along a random perturbation");
  jets->add_option("config", path)->required();
  auto* cert = app.add_subcommand("certify", "Full maximality pipeline");
  cert->add_option("config", path)->required();
  auto* chir = app.add_subcommand("chirality", "Triple sign census");
  chir->add_option("config", path)->required();
  auto* decay = app.add_subcommand("decay-probe", "Decay exponents of the minimax distance");
  decay->add_option("config", path)->required();
  decay->add_option("--directions", directions, "Directions per set")->capture_default_str();
  decay->add_option("--ts", ts, "Scales t (at least three)");
  decay->add_option("--csv", csv, "CSV output of the decay samples");
  auto* search = app.add_subcommand("search", "Look for an unlocking deformation");
  search->add_option("config", path)->required();
  search->add_option("--seeds", seeds, "Random starts");
  search->add_option("--iters", iters, "Pattern search iterations per start");
  search->add_option("--t-max", t_max, "Deformation size");
  for (auto* s : {build, dist, jets, cert, chir, decay, search}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*build) return cmd_build(name, g);
    if (*dist) return cmd_distances(path, skip_parallel, g);
    if (*jets) return cmd_jets(path, g);
    if (*cert) return cmd_certify(path, g);
    if (*chir) return cmd_chirality(path, g);
    if (*decay) return cmd_decay(path, directions, ts, csv, g);
    if (*search) return cmd_search(path, seeds, iters, t_max, g);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
