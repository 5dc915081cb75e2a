#pragma once

// Signs of oriented skew-line pairs and of generic line triples.

#include "cylcert/canon.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace cylcert {

/// Thrown for parallel or intersecting pairs and non-generic triples.
class DegenerateLinesError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Lines closer than this count as intersecting.
inline constexpr double kIntersectionThreshold = 1e-10;
/// |det[xi_1, xi_2, xi_3]| at or below this is not generic.
inline constexpr double kGenericThreshold = 1e-10;

/// sign det[xi_u, xi_v, p_v - p_u].
int pair_sign(const OrientedLine<double>& u, const OrientedLine<double>& v);

class LineTriple {
 public:
  explicit LineTriple(std::array<OrientedLine<double>, 3> lines) : lines_(std::move(lines)) {}

  const std::array<OrientedLine<double>, 3>& lines() const { return lines_; }

  /// Empty when the triple is pairwise skew and in generic position;
  /// otherwise the first failing condition.
  std::string degeneracy() const;
  bool is_generic() const { return degeneracy().empty(); }

 private:
  std::array<OrientedLine<double>, 3> lines_;
};

/// Product of the three pair signs; independent of the orientations.
int triple_sign(const LineTriple& t);

struct TripleEntry {
  std::array<std::size_t, 3> indices{};
  /// +1, -1, or 0 for degenerate triples.
  int sign = 0;
  std::string reason;
};

struct TripleCensus {
  int n_plus = 0;
  int n_minus = 0;
  int n_degenerate = 0;
  std::vector<TripleEntry> triples;
};

TripleCensus triple_census(const LineConfiguration& cfg);

}  // namespace cylcert
