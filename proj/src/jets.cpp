#include "cylcert/jets.hpp"

#include <cmath>
#include <stdexcept>

namespace cylcert {

PerturbationParams::PerturbationParams(const Eigen::VectorXd& free_values) : v_(free_values) {
  if (v_.size() != kFree) {
    throw std::invalid_argument("PerturbationParams: expected 15 free coefficients");
  }
}

int PerturbationParams::index(int j, Sign s, AxisRole r) {
  if (j < 1 || j > 3) throw std::invalid_argument("PerturbationParams: line index must be 1, 2 or 3");
  const int block = 2 * (j - 1) + (s == Sign::minus ? 1 : 0);
  if (block == 0) return -1;
  return 3 * (block - 1) + static_cast<int>(r);
}

double PerturbationParams::get(int j, Sign s, AxisRole r) const {
  const int i = index(j, s, r);
  return i < 0 ? 0.0 : v_[i];
}

PerturbationParams PerturbationParams::with(int j, Sign s, AxisRole r, double value) const {
  const int i = index(j, s, r);
  if (i < 0) throw std::invalid_argument("PerturbationParams: the coefficients of l1+ are gauge fixed");
  PerturbationParams out = *this;
  out.v_[i] = value;
  return out;
}

const std::vector<std::string>& PerturbationParams::names() {
  static const std::vector<std::string> n = o6_chart().var_names();
  return n;
}

EPointParams EPointParams::from_vector(const Eigen::VectorXd& v) {
  if (v.size() != 6) throw std::invalid_argument("EPointParams: expected 6 coordinates");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

Eigen::VectorXd EPointParams::vector() const {
  Eigen::VectorXd v(6);
  v << omega, c1m, c2p, c2m, c3p, c3m;
  return v;
}

PerturbationParams EPointParams::lift() const {
  using enum Sign;
  using enum AxisRole;
  return PerturbationParams()
      .with(3, minus, b, omega)
      .with(2, minus, a, omega)
      .with(3, plus, b, omega)
      .with(2, plus, a, omega)
      .with(1, minus, c, c1m)
      .with(2, plus, c, c2p)
      .with(2, minus, c, c2m)
      .with(3, plus, c, c3p)
      .with(3, minus, c, c3m);
}

Eigen::MatrixXd e_lift_matrix() {
  Eigen::MatrixXd m(PerturbationParams::kFree, 6);
  for (int i = 0; i < 6; ++i) {
    m.col(i) = EPointParams::from_vector(Eigen::VectorXd::Unit(6, i)).lift().vector();
  }
  return m;
}

LineConfiguration deform(const LineConfiguration& cfg, const PerturbationParams& p, double t) {
  return o6_chart(cfg).apply(p.vector(), t);
}

const std::vector<LabeledPair>& o6_pairs() {
  static const std::vector<LabeledPair> pairs = [] {
    const auto& names = o6_labels();
    const std::size_t idx[12][2] = {{0, 4}, {0, 1}, {3, 4}, {3, 1}, {0, 5}, {0, 2},
                                    {3, 5}, {3, 2}, {5, 4}, {5, 1}, {2, 4}, {2, 1}};
    std::vector<LabeledPair> out;
    for (int i = 0; i < 12; ++i) {
      out.push_back({{idx[i][0], idx[i][1]}, names[idx[i][0]] + "," + names[idx[i][1]], i / 4});
    }
    return out;
  }();
  return pairs;
}

std::vector<LabeledPair> all_pairs(const LineConfiguration& cfg, bool skip_parallel) {
  std::vector<LabeledPair> out;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.size(); ++j) {
      if (skip_parallel && cfg.is_declared_parallel(i, j)) continue;
      out.push_back({{i, j}, cfg.labels()[i] + "," + cfg.labels()[j], 0});
    }
  }
  return out;
}

std::string to_string(JetSource s) {
  switch (s) {
    case JetSource::closed_form: return "closed_form";
    case JetSource::series: return "series";
    case JetSource::finite_difference: return "finite_difference";
  }
  return "unknown";
}

JetTable first_order_closed_form(const PerturbationParams& p) {
  using enum Sign;
  using enum AxisRole;
  auto v = [&](int j, Sign s, AxisRole r) { return p.get(j, s, r); };
  JetTable t;
  t.pairs = o6_pairs();
  t.source = JetSource::closed_form;
  t.has_order1 = true;
  t.order1.resize(12);
  t.order1 << -2 * v(2, minus, b),
      2 * v(2, plus, b),
      2 * (v(2, minus, b) - v(1, minus, a)),
      2 * (v(1, minus, a) - v(2, plus, b)),
      2 * v(3, minus, a),
      -2 * v(3, plus, a),
      2 * (v(1, minus, b) - v(3, minus, a)),
      2 * (v(3, plus, a) - v(1, minus, b)),
      2 * (v(3, minus, b) - v(2, minus, a)),
      2 * (v(2, plus, a) - v(3, minus, b)),
      2 * (v(2, minus, a) - v(3, plus, b)),
      2 * (v(3, plus, b) - v(2, plus, a));
  return t;
}

std::array<double, 3> second_order_combinations(const EPointParams& e) {
  const double w = e.omega;
  const double u1 = e.c1m * e.c2p - e.c1m * e.c1m - e.c1m * e.c2m + 2 * e.c1m * w - 2 * w * w;
  const double u2 = e.c1m * e.c3p - e.c3m * e.c3m - e.c1m * e.c3m - e.c3p * e.c3p;
  const double u3 = e.c2m * e.c3p + e.c2p * e.c3m - e.c2m * e.c3m - e.c2p * e.c3p - e.c2m * e.c2m -
                    e.c2p * e.c2p;
  return {u1, u2, u3};
}

namespace {

// Truncated power series c0 + c1 t + c2 t^2.
struct Series {
  double c0 = 0, c1 = 0, c2 = 0;
};

Series operator*(const Series& a, const Series& b) {
  return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0, a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0};
}

Series operator/(const Series& a, const Series& b) {
  const double q0 = a.c0 / b.c0;
  const double q1 = (a.c1 - q0 * b.c1) / b.c0;
  const double q2 = (a.c2 - q0 * b.c2 - q1 * b.c1) / b.c0;
  return {q0, q1, q2};
}

struct SeriesVec {
  Vec3d v0, v1, v2;
};

SeriesVec operator-(const SeriesVec& a, const SeriesVec& b) {
  return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2};
}

Series dot(const SeriesVec& a, const SeriesVec& b) {
  return {a.v0.dot(b.v0), a.v0.dot(b.v1) + a.v1.dot(b.v0),
          a.v0.dot(b.v2) + a.v1.dot(b.v1) + a.v2.dot(b.v0)};
}

SeriesVec cross(const SeriesVec& a, const SeriesVec& b) {
  return {a.v0.cross(b.v0), a.v0.cross(b.v1) + a.v1.cross(b.v0),
          a.v0.cross(b.v2) + a.v1.cross(b.v1) + a.v2.cross(b.v0)};
}

struct LineSeries {
  SeriesVec x, d;
};

LineSeries line_series(const RotationChart& chart, std::size_t k, const Eigen::VectorXd& p) {
  const auto& la = chart.line_axes()[k];
  std::array<Mat3d, 3> K;
  std::array<double, 3> th{};
  for (int i = 0; i < 3; ++i) {
    K[i] = skew<double>(la.axes[i].normalized());
    th[i] = la.var[i] < 0 ? 0.0 : p[la.var[i]];
  }
  Mat3d m1 = Mat3d::Zero();
  Mat3d m2 = Mat3d::Zero();
  for (int i = 0; i < 3; ++i) {
    m1 += th[i] * K[i];
    m2 += 0.5 * th[i] * th[i] * K[i] * K[i];
    for (int j = i + 1; j < 3; ++j) m2 += th[i] * th[j] * K[i] * K[j];
  }
  const auto& l = chart.base()[k];
  return {{l.touch_point(), m1 * l.touch_point(), m2 * l.touch_point()},
          {l.direction(), m1 * l.direction(), m2 * l.direction()}};
}

}  // namespace

JetTable series_jets(const RotationChart& chart, const Eigen::VectorXd& p,
                     const std::vector<LabeledPair>& pairs) {
  if (p.size() != chart.n_vars()) {
    throw std::invalid_argument("series_jets: parameter vector has the wrong size");
  }
  std::vector<LineSeries> ls;
  for (std::size_t k = 0; k < chart.base().size(); ++k) ls.push_back(line_series(chart, k, p));
  JetTable t;
  t.pairs = pairs;
  t.source = JetSource::series;
  t.has_order1 = t.has_order2 = true;
  const auto m = static_cast<Eigen::Index>(pairs.size());
  t.order1.resize(m);
  t.order2.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& u = ls[pairs[i].pair.first];
    const auto& v = ls[pairs[i].pair.second];
    const SeriesVec c = cross(u.d, v.d);
    const Series den = dot(c, c);
    if (!(den.c0 > 2 * kParallelThreshold)) {
      throw std::invalid_argument("series_jets: pair " + pairs[i].label + " is parallel at the base point");
    }
    const Series det = dot(c, v.x - u.x);
    const Series d2 = det * det / den;
    t.order1[i] = d2.c1;
    t.order2[i] = d2.c2;
  }
  return t;
}

PairExpansion pair_expansion(const RotationChart& chart, const std::vector<LabeledPair>& pairs) {
  const Eigen::Index n = chart.n_vars();
  const auto m = static_cast<Eigen::Index>(pairs.size());
  PairExpansion out;
  out.base.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.base[i] = line_distance_sq(chart.base()[pairs[i].pair.first], chart.base()[pairs[i].pair.second]);
  }
  out.linear.resize(m, n);
  out.quad.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(n, n));
  std::vector<Eigen::VectorXd> diag(static_cast<std::size_t>(n));
  for (Eigen::Index a = 0; a < n; ++a) {
    const JetTable t = series_jets(chart, Eigen::VectorXd::Unit(n, a), pairs);
    out.linear.col(a) = t.order1;
    diag[a] = t.order2;
    for (Eigen::Index i = 0; i < m; ++i) out.quad[i](a, a) = t.order2[i];
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const JetTable t = series_jets(chart, Eigen::VectorXd::Unit(n, a) + Eigen::VectorXd::Unit(n, b), pairs);
      for (Eigen::Index i = 0; i < m; ++i) {
        const double q = 0.5 * (t.order2[i] - diag[a][i] - diag[b][i]);
        out.quad[i](a, b) = out.quad[i](b, a) = q;
      }
    }
  }
  return out;
}

namespace {

Eigen::VectorXd squared_distances(const LineConfiguration& cfg, const std::vector<LabeledPair>& pairs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = line_distance_sq(cfg[pairs[i].pair.first], cfg[pairs[i].pair.second]);
  }
  return v;
}

}  // namespace

JetTable finite_difference_jets(const ConfigPath& path, const std::vector<LabeledPair>& pairs, int order,
                                const FiniteDifferenceSteps& steps) {
  if (order != 1 && order != 2) throw std::invalid_argument("finite_difference_jets: order must be 1 or 2");
  if (!(steps.h1 > 0.0) || !(steps.h2 > 0.0)) {
    throw std::invalid_argument("finite_difference_jets: steps must be positive");
  }
  auto f = [&](double t) { return squared_distances(path(t), pairs); };
  JetTable t;
  t.pairs = pairs;
  t.source = JetSource::finite_difference;
  if (order == 1) {
    const double h = steps.h1;
    const Eigen::VectorXd d1 = (f(h) - f(-h)) / (2 * h);
    const Eigen::VectorXd d2 = (f(2 * h) - f(-2 * h)) / (4 * h);
    t.order1 = d1;
    t.error1 = (d1 - d2).cwiseAbs() / 3.0;
    t.has_order1 = true;
  } else {
    const Eigen::VectorXd f0 = f(0.0);
    auto stencil = [&](double h) -> Eigen::VectorXd {
      return (-f(2 * h) + 16 * f(h) - 30 * f0 + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
    };
    const Eigen::VectorXd s_h = stencil(steps.h2);
    const Eigen::VectorXd s_half = stencil(steps.h2 / 2);
    const Eigen::VectorXd r = (16 * s_half - s_h) / 15.0;
    t.order2 = r / 2;
    t.error2 = (r - s_half).cwiseAbs() / 2;
    t.has_order2 = true;
  }
  const Eigen::VectorXd& err = order == 1 ? t.error1 : t.error2;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    if (!(err[i] <= kJetErrorFlag)) t.flagged.push_back(pairs[static_cast<std::size_t>(i)].label);
  }
  return t;
}

JetTable finite_difference_jets(const RotationChart& chart, const Eigen::VectorXd& p,
                                const std::vector<LabeledPair>& pairs, int order,
                                const FiniteDifferenceSteps& steps) {
  return finite_difference_jets([&](double t) { return chart.apply(p, t); }, pairs, order, steps);
}

JetTable finite_difference_jets(const LineConfiguration& cfg, const PerturbationParams& p, int order,
                                const FiniteDifferenceSteps& steps) {
  return finite_difference_jets(o6_chart(cfg), p.vector(), o6_pairs(), order, steps);
}

}  // namespace cylcert
