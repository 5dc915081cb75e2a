#include "cylcert/chirality.hpp"

#include <cmath>

namespace cylcert {

namespace {

std::string pair_problem(const OrientedLine<double>& u, const OrientedLine<double>& v) {
  if (std::abs(u.direction().dot(v.direction())) >= 1.0 - kParallelThreshold) return "parallel lines";
  if (line_distance_sq(u, v) <= kIntersectionThreshold * kIntersectionThreshold) return "intersecting lines";
  return {};
}

}  // namespace

int pair_sign(const OrientedLine<double>& u, const OrientedLine<double>& v) {
  if (const std::string p = pair_problem(u, v); !p.empty()) throw DegenerateLinesError("pair_sign: " + p);
  Mat3d m;
  m.col(0) = u.direction();
  m.col(1) = v.direction();
  m.col(2) = v.point() - u.point();
  return m.determinant() > 0 ? 1 : -1;
}

std::string LineTriple::degeneracy() const {
  const int idx[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& ij : idx) {
    const std::string p = pair_problem(lines_[ij[0]], lines_[ij[1]]);
    if (!p.empty()) return p + " (" + std::to_string(ij[0] + 1) + "," + std::to_string(ij[1] + 1) + ")";
  }
  Mat3d m;
  for (int i = 0; i < 3; ++i) m.col(i) = lines_[i].direction();
  if (std::abs(m.determinant()) <= kGenericThreshold) return "directions parallel to a common plane";
  return {};
}

int triple_sign(const LineTriple& t) {
  if (const std::string d = t.degeneracy(); !d.empty()) throw DegenerateLinesError("triple_sign: " + d);
  const auto& l = t.lines();
  return pair_sign(l[0], l[1]) * pair_sign(l[0], l[2]) * pair_sign(l[1], l[2]);
}

TripleCensus triple_census(const LineConfiguration& cfg) {
  TripleCensus c;
  const std::size_t n = cfg.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const LineTriple t({OrientedLine<double>(cfg[i]), OrientedLine<double>(cfg[j]), OrientedLine<double>(cfg[k])});
        TripleEntry e;
        e.indices = {i, j, k};
        e.reason = t.degeneracy();
        if (e.reason.empty()) {
          e.sign = triple_sign(t);
          (e.sign > 0 ? c.n_plus : c.n_minus)++;
        } else {
          ++c.n_degenerate;
        }
        c.triples.push_back(e);
      }
    }
  }
  return c;
}

}  // namespace cylcert
