#include "cylcert/linalg.hpp"

#include <cmath>
#include <limits>

namespace cylcert {

namespace {

int rank_from(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_tol * sv[0]) ++r;
  }
  return r;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0) return 0;
  return rank_from(Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues(), rel_tol);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const int r = rank_from(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(n - r);
}

Eigen::MatrixXd left_null_space(const Eigen::MatrixXd& a, double rel_tol) {
  return null_space(a.transpose(), rel_tol);
}

Eigen::MatrixXd rref(const Eigen::MatrixXd& a, double tol) {
  Eigen::MatrixXd m = a;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pivot;
    const double best = m.col(col).tail(m.rows() - row).cwiseAbs().maxCoeff(&pivot);
    if (best <= tol) {
      m.col(col).tail(m.rows() - row).setZero();
      continue;
    }
    pivot += row;
    m.row(row).swap(m.row(pivot));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != row) m.row(r) -= m(r, col) * m.row(row);
    }
    ++row;
  }
  m = m.unaryExpr([tol](double v) { return std::abs(v) <= tol ? 0.0 : v; });
  return m;
}

std::optional<Eigen::VectorXd> find_nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                         double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  // Tableau [A I | b] with b >= 0; minimize the sum of artificials.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b[i] < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = s * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = s * b[i];
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;
  // Reduced costs of the phase-one objective.
  for (Eigen::Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) t(m, n + i) = 0.0;

  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > tol) {
        const double q = t(i, n + m) / t(i, enter);
        if (q < ratio - tol || (std::abs(q - ratio) <= tol && leave >= 0 && basis[i] < basis[leave])) {
          ratio = q;
          leave = i;
        }
      }
    }
    if (leave < 0) break;
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[leave] = enter;
  }
  if (-t(m, n + m) > tol * std::max(1.0, b.cwiseAbs().sum())) return std::nullopt;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = std::max(0.0, t(i, n + m));
  }
  if ((a * x - b).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff())) return std::nullopt;
  return x;
}

}  // namespace cylcert
