#pragma once

// Certification that a family of quadratic forms {Q_a} satisfies
// max_a Q_a(x) >= v |x|^2 for some v > 0.
//
// The unit sphere is covered by the 2n faces of the cube [-1, 1]^n, which are
// subdivided into boxes. On a box the bound for a convex combination
// M = sum lambda_a Q_a is
//   x^T M x >= nu |x|^2 + lower(x^T (M - nu I) x),
// with nu the Rayleigh quotient at the box center and the second term from
// the centered form. Dividing by the range of |x|^2 on the box gives a lower
// bound for max_a Q_a(x) / |x|^2.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylcert {

enum class Verdict { positively_defined, not_positively_defined, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::positively_defined: return "positively_defined";
    case Verdict::not_positively_defined: return "not_positively_defined";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct WorkLog {
  long cells_processed = 0;
  long cells_discharged = 0;
  long cells_split = 0;
  int max_depth = 0;
  long sample_points = 0;
  std::size_t combinations = 0;
  /// Smallest max_a Q_a(x) / |x|^2 seen at sample points and cell centers.
  double upper_bound = std::numeric_limits<double>::infinity();
};

struct PositivityCertificate {
  Verdict verdict = Verdict::inconclusive;
  double v_constant = 0.0;
  Eigen::VectorXd witness;
  WorkLog work_log;
};

struct PositivityOptions {
  long budget = 1'000'000;
  /// A box is discharged once its bound reaches this fraction of the
  /// running upper bound, which keeps v close to the true minimum.
  double target_fraction = 0.5;
  double lambda_step = 0.1;
  std::size_t max_combinations = 300;
  int seed_samples = 4096;
  std::uint64_t seed = 0;
  /// Relative to the largest coefficient of the family.
  double witness_tolerance = 1e-12;
};

namespace detail {

inline void simplex_grid(int m, int k, int pos, int left, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (pos == m - 1) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int i = left; i >= 0; --i) {
    cur[pos] = i;
    simplex_grid(m, k, pos + 1, left - i, cur, out);
  }
}

inline double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Weights on a simplex grid of step 1/k, with k reduced until the count fits.
inline std::vector<Eigen::VectorXd> simplex_weights(int m, double step, std::size_t max_count) {
  int k = std::max(1, static_cast<int>(std::lround(1.0 / step)));
  while (k > 1 && binomial(k + m - 1, m - 1) > static_cast<double>(max_count)) --k;
  std::vector<std::vector<int>> grid;
  std::vector<int> cur(static_cast<std::size_t>(m));
  simplex_grid(m, k, 0, k, cur, grid);
  std::vector<Eigen::VectorXd> out;
  for (const auto& g : grid) {
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w[i] = static_cast<double>(g[static_cast<std::size_t>(i)]) / k;
    out.push_back(w);
  }
  return out;
}

template <typename Scalar>
struct Cell {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> center;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> radius;
  int depth = 0;
};

// Lower bound of x^T A x over the box center +- radius.
template <typename Scalar>
Scalar centered_form_lower(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& r) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ac = a * c;
  Scalar lb = c.dot(ac) - Scalar(2) * ac.cwiseAbs().dot(r);
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i] == Scalar(0)) continue;
    if (a(i, i) < Scalar(0)) lb += a(i, i) * r[i] * r[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) lb -= std::abs(a(i, j)) * r[i] * r[j];
    }
  }
  return lb;
}

}  // namespace detail

/// Decides whether {Q_a} is positively defined on R^n. The verdict is never
/// wrong up to floating-point rounding: a positive verdict carries a lower
/// bound v, a negative one a unit witness with max_a Q_a(witness) <= 0 up to
/// the witness tolerance, and an exhausted budget yields inconclusive.
template <typename Scalar = double>
PositivityCertificate certify_positivity(const std::vector<Eigen::MatrixXd>& forms,
                                         const PositivityOptions& opt = {}) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::abs;

  if (forms.empty()) throw std::invalid_argument("certify_positivity: need at least one form");
  const Eigen::Index n = forms[0].rows();
  for (const auto& f : forms) {
    if (f.rows() != n || f.cols() != n) throw std::invalid_argument("certify_positivity: forms must be square of equal size");
  }
  PositivityCertificate cert;
  if (n == 0) {
    cert.verdict = Verdict::positively_defined;
    cert.v_constant = std::numeric_limits<double>::infinity();
    return cert;
  }

  std::vector<Mat> q;
  double scale = 0.0;
  for (const auto& f : forms) {
    const Eigen::MatrixXd s = 0.5 * (f + f.transpose());
    q.push_back(s.cast<Scalar>());
    scale = std::max(scale, s.cwiseAbs().maxCoeff());
  }
  const Scalar tau = Scalar(opt.witness_tolerance * std::max(scale, 1e-300));

  const auto weights = detail::simplex_weights(static_cast<int>(q.size()), opt.lambda_step, opt.max_combinations);
  std::vector<Mat> combos;
  for (const auto& w : weights) {
    Mat m = Mat::Zero(n, n);
    for (std::size_t a = 0; a < q.size(); ++a) m += Scalar(w[static_cast<Eigen::Index>(a)]) * q[a];
    combos.push_back(m);
  }
  cert.work_log.combinations = combos.size();

  auto family_max = [&](const Vec& x) {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (const auto& m : q) best = std::max(best, Scalar(x.dot(m * x)));
    return best;
  };

  Scalar upper = std::numeric_limits<Scalar>::infinity();
  auto probe = [&](const Vec& x) {
    const Scalar nx = x.squaredNorm();
    const Scalar v = family_max(x);
    if (v <= tau * nx) {
      cert.verdict = Verdict::not_positively_defined;
      cert.witness = (x / std::sqrt(nx)).template cast<double>();
      return true;
    }
    upper = std::min(upper, v / nx);
    return false;
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < opt.seed_samples; ++s) {
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = Scalar(normal(rng));
    ++cert.work_log.sample_points;
    if (probe(x)) {
      cert.work_log.upper_bound = static_cast<double>(upper);
      return cert;
    }
  }

  Scalar v_const = std::numeric_limits<Scalar>::infinity();
  const Scalar kappa = Scalar(opt.target_fraction);

  for (Eigen::Index face = 0; face < 2 * n; ++face) {
    std::vector<detail::Cell<Scalar>> stack;
    detail::Cell<Scalar> root{Vec::Zero(n), Vec::Ones(n), 0};
    root.center[face / 2] = face % 2 == 0 ? Scalar(1) : Scalar(-1);
    root.radius[face / 2] = Scalar(0);
    stack.push_back(root);

    while (!stack.empty()) {
      const detail::Cell<Scalar> cell = stack.back();
      stack.pop_back();
      if (++cert.work_log.cells_processed > opt.budget) {
        cert.verdict = Verdict::inconclusive;
        cert.work_log.cells_processed = opt.budget;
        cert.work_log.upper_bound = static_cast<double>(upper);
        return cert;
      }
      cert.work_log.max_depth = std::max(cert.work_log.max_depth, cell.depth);
      const Vec& c = cell.center;
      const Vec& r = cell.radius;

      if (probe(c)) {
        cert.work_log.upper_bound = static_cast<double>(upper);
        return cert;
      }
      int free_dims = 0;
      for (Eigen::Index i = 0; i < n; ++i) free_dims += r[i] > Scalar(0) ? 1 : 0;
      if (free_dims <= 4) {
        for (long mask = 0; mask < (1L << free_dims); ++mask) {
          Vec x = c;
          int bit = 0;
          for (Eigen::Index i = 0; i < n; ++i) {
            if (r[i] > Scalar(0)) x[i] += ((mask >> bit++) & 1) ? r[i] : -r[i];
          }
          if (probe(x)) {
            cert.work_log.upper_bound = static_cast<double>(upper);
            return cert;
          }
        }
      }

      Scalar min_n(0), max_n(0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar lo = std::max(Scalar(0), abs(c[i]) - r[i]);
        const Scalar hi = abs(c[i]) + r[i];
        min_n += lo * lo;
        max_n += hi * hi;
      }
      const Scalar cc = c.squaredNorm();
      Scalar best = -std::numeric_limits<Scalar>::infinity();
      const Scalar target = kappa * upper;
      for (const auto& m : combos) {
        const Scalar nu = std::max(Scalar(0), Scalar(c.dot(m * c)) / cc);
        Mat shifted = m;
        shifted.diagonal().array() -= nu;
        const Scalar rest = detail::centered_form_lower<Scalar>(shifted, c, r);
        const Scalar lb = nu + (rest >= Scalar(0) ? rest / max_n : rest / min_n);
        best = std::max(best, lb);
        if (best >= target && best > Scalar(0)) break;
      }

      if (best > Scalar(0) && best >= target) {
        ++cert.work_log.cells_discharged;
        v_const = std::min(v_const, best);
        continue;
      }
      Eigen::Index widest;
      r.maxCoeff(&widest);
      ++cert.work_log.cells_split;
      for (const Scalar sgn : {Scalar(1), Scalar(-1)}) {
        detail::Cell<Scalar> child = cell;
        child.radius[widest] = r[widest] / Scalar(2);
        child.center[widest] = c[widest] + sgn * child.radius[widest];
        child.depth = cell.depth + 1;
        stack.push_back(child);
      }
    }
  }
  cert.verdict = Verdict::positively_defined;
  cert.v_constant = static_cast<double>(v_const);
  cert.work_log.upper_bound = static_cast<double>(upper);
  return cert;
}

/// Re-checks a positive certificate on random unit vectors:
/// max_a Q_a(x) >= v (1 - 1e-6) for every sample.
bool validate_certificate(const std::vector<Eigen::MatrixXd>& forms, const PositivityCertificate& cert,
                          long samples = 100000, std::uint64_t seed = 1);

}  // namespace cylcert
