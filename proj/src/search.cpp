#include "cylcert/search.hpp"

#include "cylcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cylcert {

namespace {

double base_value(const RotationChart& chart, bool skip_parallel) {
  return min_distance(chart.base(), skip_parallel).value;
}

Eigen::VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Eigen::MatrixXd random_orthonormal(std::mt19937_64& rng, const Eigen::MatrixXd& span) {
  const Eigen::Index d = span.cols();
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) g.col(j) = gaussian(rng, d);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  return span * q;
}

struct PatternSearch {
  const RotationChart& chart;
  double base;
  double t;
  bool skip_parallel;
  long evaluations = 0;

  double value(const Eigen::VectorXd& p) {
    ++evaluations;
    return min_distance(chart.apply(p, t), skip_parallel).value - base;
  }

  // Poll +-q_i for a random orthonormal basis of span; expand on success,
  // contract otherwise. Directions stay on the unit sphere.
  double run(Eigen::VectorXd& p, const Eigen::MatrixXd& span, int iters, std::mt19937_64& rng) {
    double f = value(p);
    double step = 0.5;
    for (int it = 0; it < iters && step > 1e-12; ++it) {
      const Eigen::MatrixXd q = random_orthonormal(rng, span);
      bool improved = false;
      for (Eigen::Index i = 0; i < q.cols() && !improved; ++i) {
        for (const double s : {1.0, -1.0}) {
          Eigen::VectorXd c = p + s * step * q.col(i);
          const double n = c.norm();
          if (!(n > 0)) continue;
          c /= n;
          const double fc = value(c);
          if (fc > f) {
            p = c;
            f = fc;
            improved = true;
            break;
          }
        }
      }
      step = improved ? std::min(1.0, 2 * step) : 0.5 * step;
    }
    return f;
  }
};

}  // namespace

double min_distance_gain(const RotationChart& chart, const Eigen::VectorXd& p, double t, bool skip_parallel) {
  if (p.size() != chart.n_vars() || !(p.norm() > 0)) {
    throw std::invalid_argument("min_distance_gain: direction must be a nonzero chart vector");
  }
  return min_distance(chart.apply(p / p.norm(), t), skip_parallel).value - base_value(chart, skip_parallel);
}

Eigen::MatrixXd tangent_action(const RotationChart& chart, const Mat3d& g, const std::vector<std::size_t>& perm) {
  const auto& base = chart.base();
  const auto nl = static_cast<Eigen::Index>(base.size());
  const Eigen::Index n = chart.n_vars();
  // Columns: chart variables, then the three global rotations.
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6 * nl, n + 3);
  for (Eigen::Index k = 0; k < nl; ++k) {
    const auto& l = base[static_cast<std::size_t>(k)];
    const auto& la = chart.line_axes()[static_cast<std::size_t>(k)];
    for (int i = 0; i < 3; ++i) {
      if (la.var[i] < 0) continue;
      const Vec3d u = la.axes[i].normalized();
      j.block<3, 1>(6 * k, la.var[i]) += u.cross(l.touch_point());
      j.block<3, 1>(6 * k + 3, la.var[i]) += u.cross(l.direction());
    }
    for (int m = 0; m < 3; ++m) {
      const Vec3d u = Vec3d::Unit(m);
      j.block<3, 1>(6 * k, n + m) = u.cross(l.touch_point());
      j.block<3, 1>(6 * k + 3, n + m) = u.cross(l.direction());
    }
  }
  // Image of a stacked variation under g, re-indexed by perm.
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(6 * nl, 6 * nl);
  for (Eigen::Index k = 0; k < nl; ++k) {
    const auto target = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(k)]);
    const double s = base[static_cast<std::size_t>(target)].direction().dot(g * base[static_cast<std::size_t>(k)].direction()) < 0 ? -1.0 : 1.0;
    phi.block<3, 3>(6 * target, 6 * k) = g;
    phi.block<3, 3>(6 * target + 3, 6 * k + 3) = s * g;
  }
  const Eigen::MatrixXd rhs = phi * j.leftCols(n);
  const Eigen::MatrixXd sol = j.completeOrthogonalDecomposition().solve(rhs);
  return sol.topRows(n);
}

std::vector<Eigen::MatrixXd> symmetric_subspaces(const RotationChart& chart) {
  const auto group = symmetry_group(chart.base());
  const Eigen::Index n = chart.n_vars();
  std::vector<Eigen::MatrixXd> actions;
  for (const auto& g : group) {
    const auto perm = symmetry_orbit_check(chart.base(), g);
    if (perm) actions.push_back(tangent_action(chart, g.matrix(), *perm) - Eigen::MatrixXd::Identity(n, n));
  }
  std::vector<Eigen::MatrixXd> out;
  std::vector<Eigen::MatrixXd> projectors;
  auto add = [&](const Eigen::MatrixXd& stacked) {
    const Eigen::MatrixXd k = null_space(stacked, 1e-8);
    if (k.cols() == 0 || k.cols() == n) return;
    const Eigen::MatrixXd p = k * k.transpose();
    for (const auto& q : projectors) {
      if ((p - q).norm() < 1e-6) return;
    }
    projectors.push_back(p);
    out.push_back(k);
  };
  for (std::size_t a = 0; a < actions.size(); ++a) {
    for (std::size_t b = a; b < actions.size(); ++b) {
      Eigen::MatrixXd s(2 * n, n);
      s << actions[a], actions[b];
      add(s);
    }
  }
  return out;
}

UnlockResult unlock_search(const RotationChart& chart, const UnlockOptions& opt) {
  if (!(opt.t_max > 0)) throw std::invalid_argument("unlock_search: t_max must be positive");
  const Eigen::Index n = chart.n_vars();
  if (n == 0) throw std::invalid_argument("unlock_search: chart has no variables");
  std::mt19937_64 rng(opt.seed);
  UnlockResult res;
  res.base_value = base_value(chart, opt.skip_parallel);
  PatternSearch ps{chart, res.base_value, opt.t_max, opt.skip_parallel};
  const Eigen::MatrixXd full = Eigen::MatrixXd::Identity(n, n);

  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_p;
  auto consider = [&](const Eigen::VectorXd& p, double f) {
    if (f > best) {
      best = f;
      best_p = p;
    }
  };

  std::vector<std::pair<double, Eigen::VectorXd>> seeded;
  if (opt.symmetry_seeding) {
    const auto spaces = symmetric_subspaces(chart);
    res.subspaces = static_cast<int>(spaces.size());
    for (const auto& k : spaces) {
      for (int s = 0; s < opt.subspace_starts; ++s) {
        Eigen::VectorXd p = k * gaussian(rng, k.cols());
        p.normalize();
        const double f = ps.run(p, k, opt.iters, rng);
        consider(p, f);
        seeded.emplace_back(f, p);
      }
    }
  }
  for (int s = 0; s < opt.seeds; ++s) {
    Eigen::VectorXd p = gaussian(rng, n).normalized();
    consider(p, ps.run(p, full, opt.iters, rng));
  }
  std::stable_sort(seeded.begin(), seeded.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < seeded.size() && static_cast<int>(i) < opt.polish; ++i) {
    Eigen::VectorXd p = seeded[i].second;
    consider(p, ps.run(p, full, opt.iters, rng));
  }

  res.best_direction = best_p;
  res.best_gain = best;
  res.best_t = opt.t_max;
  for (int k = 1; k < opt.t_levels; ++k) {
    const double t = opt.t_max * std::ldexp(1.0, -k);
    ps.t = t;
    const double f = ps.value(best_p);
    if (f > res.best_gain) {
      res.best_gain = f;
      res.best_t = t;
    }
  }
  res.evaluations = ps.evaluations;
  return res;
}

UnlockSetup default_unlock_setup(const LineConfiguration& cfg) {
  if (is_canonical_o6(cfg)) {
    UnlockOptions o;
    o.skip_parallel = true;
    o.t_max = 1e-2;
    return {o6_chart(cfg), o};
  }
  UnlockOptions o;
  o.skip_parallel = false;
  o.t_max = 0.1;
  o.symmetry_seeding = true;
  o.subspace_starts = 32;
  return {local_rotation_chart(cfg, false), o};
}

double fit_exponent(const std::vector<double>& ts, const std::vector<double>& values) {
  if (ts.size() < 3) throw std::invalid_argument("need ≥ 3 scales");
  if (ts.size() != values.size()) throw std::invalid_argument("fit_exponent: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0) || !(values[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(ts[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double DecayReport::min_exponent(bool in_e) const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& f : fits) {
    if (f.in_e == in_e) v = std::isnan(f.exponent) ? f.exponent : std::min(v, f.exponent);
    if (std::isnan(v)) return v;
  }
  return v;
}

double DecayReport::max_exponent(bool in_e) const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& f : fits) {
    if (f.in_e == in_e) v = std::isnan(f.exponent) ? f.exponent : std::max(v, f.exponent);
    if (std::isnan(v)) return v;
  }
  return v;
}

DecayReport decay_probe(const RotationChart& chart, const Eigen::MatrixXd& e_basis, const DecayOptions& opt) {
  if (opt.ts.size() < 3) throw std::invalid_argument("need ≥ 3 scales");
  const Eigen::Index n = chart.n_vars();
  std::mt19937_64 rng(opt.seed);
  DecayReport rep;
  rep.ts = opt.ts;
  const double base = base_value(chart, opt.skip_parallel);
  auto probe = [&](const Eigen::VectorXd& dir, bool in_e) {
    DecayFit f;
    f.direction = dir;
    f.in_e = in_e;
    for (const double t : opt.ts) {
      f.decay.push_back(base - min_distance(chart.apply(dir, t), opt.skip_parallel).value);
    }
    f.exponent = fit_exponent(opt.ts, f.decay);
    rep.fits.push_back(f);
  };
  const bool have_e = e_basis.cols() > 0;
  if (have_e) {
    for (int i = 0; i < opt.directions; ++i) probe((e_basis * gaussian(rng, e_basis.cols())).normalized(), true);
  }
  for (int i = 0; i < opt.directions; ++i) probe(gaussian(rng, n).normalized(), false);
  if (have_e) {
    rep.c_d = std::numeric_limits<double>::infinity();
    rep.c_u = -std::numeric_limits<double>::infinity();
    for (const auto& f : rep.fits) {
      if (!f.in_e) continue;
      for (std::size_t i = 0; i < opt.ts.size(); ++i) {
        const double c = f.decay[i] / (opt.ts[i] * opt.ts[i]);
        rep.c_d = std::min(rep.c_d, c);
        rep.c_u = std::max(rep.c_u, c);
      }
    }
  }
  return rep;
}

}  // namespace cylcert
