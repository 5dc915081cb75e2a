#include "cylcert/chirality.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cylcert;

namespace {

OrientedLine<double> random_line(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return OrientedLine<double>(Vec3d(g(rng), g(rng), g(rng)), oracle::random_unit(rng));
}

Mat3d random_rotation(std::mt19937_64& rng) {
  return Eigen::AngleAxisd(3.0 * oracle::random_unit(rng).x(), oracle::random_unit(rng)).toRotationMatrix();
}

// Crossing sign of the two lines in a projection along `view`: the strand
// nearer the viewer crosses over the other one. With this convention the
// crossing sign is the negative of the pair sign.
int crossing_sign(const OrientedLine<double>& u, const OrientedLine<double>& v, const Vec3d& view) {
  const Vec3d e1 = view.unitOrthogonal(), e2 = view.cross(e1);
  // Solve pu + s du = pv + t dv in the projection plane.
  Eigen::Matrix2d a;
  a << u.direction().dot(e1), -v.direction().dot(e1),
       u.direction().dot(e2), -v.direction().dot(e2);
  const Vec3d w = v.point() - u.point();
  const Eigen::Vector2d st = a.colPivHouseholderQr().solve(Eigen::Vector2d(w.dot(e1), w.dot(e2)));
  const double du = (u.point() + st[0] * u.direction()).dot(view);
  const double dv = (v.point() + st[1] * v.direction()).dot(view);
  const auto& over = du > dv ? u : v;
  const auto& under = du > dv ? v : u;
  return over.direction().cross(under.direction()).dot(view) > 0 ? 1 : -1;
}

}  // namespace

TEST_SUITE("chirality") {

TEST_CASE("pair sign matches projected crossings") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto u = random_line(rng), v = random_line(rng);
    CHECK(pair_sign(u, v) == -crossing_sign(u, v, oracle::random_unit(rng)));
    CHECK(pair_sign(u, v) == pair_sign(v, u));
    CHECK(pair_sign(u.reversed(), v) == -pair_sign(u, v));
  }
}

TEST_CASE("pair sign does not depend on the chosen points") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto u = random_line(rng), v = random_line(rng);
    const OrientedLine<double> u2(u.point() + 3.7 * u.direction(), u.direction());
    const OrientedLine<double> v2(v.point() - 1.3 * v.direction(), v.direction());
    CHECK(pair_sign(u2, v2) == pair_sign(u, v));
  }
}

TEST_CASE("degenerate pairs and triples throw") {
  const OrientedLine<double> a(Vec3d::Zero(), Vec3d::UnitX());
  const OrientedLine<double> b(Vec3d::UnitY(), Vec3d::UnitX());
  const OrientedLine<double> c(Vec3d::Zero(), Vec3d::UnitY());
  CHECK_THROWS_AS(pair_sign(a, b), DegenerateLinesError);
  CHECK_THROWS_AS(pair_sign(a, c), DegenerateLinesError);
  const OrientedLine<double> d(Vec3d::UnitZ(), Vec3d(1, 1, 0));
  const LineTriple coplanar_dirs({OrientedLine<double>(Vec3d::UnitZ(), Vec3d::UnitY()), d,
                                  OrientedLine<double>(-Vec3d::UnitZ(), Vec3d::UnitX())});
  CHECK_FALSE(coplanar_dirs.is_generic());
  CHECK_THROWS_AS(triple_sign(coplanar_dirs), DegenerateLinesError);
}

TEST_CASE("triple sign symmetries") {
  std::mt19937_64 rng(3);
  int tested = 0;
  for (int k = 0; k < 300; ++k) {
    const std::array<OrientedLine<double>, 3> l{random_line(rng), random_line(rng), random_line(rng)};
    const LineTriple t(l);
    if (!t.is_generic()) continue;
    ++tested;
    const int s = triple_sign(t);
    CHECK(triple_sign(LineTriple({l[0].reversed(), l[1], l[2].reversed()})) == s);
    CHECK(triple_sign(LineTriple({l[1], l[2], l[0]})) == s);
    const Mat3d r = random_rotation(rng);
    CHECK(triple_sign(LineTriple({transform_line(r, l[0]), transform_line(r, l[1]), transform_line(r, l[2])})) == s);
    const Mat3d m = -Mat3d::Identity();
    CHECK(triple_sign(LineTriple({transform_line(m, l[0]), transform_line(m, l[1]), transform_line(m, l[2])})) == -s);
  }
  CHECK(tested > 250);
}

TEST_CASE("O6 census") {
  const TripleCensus c = triple_census(build_O6());
  CHECK(c.triples.size() == 20);
  CHECK(c.n_degenerate == 12);
  CHECK(c.n_plus + c.n_minus == 8);

  const TripleCensus m = triple_census(apply(central_reflection(), build_O6()));
  CHECK(m.n_plus == c.n_minus);
  CHECK(m.n_minus == c.n_plus);
}

TEST_CASE("mirror census of random configurations") {
  std::mt19937_64 rng(4);
  std::vector<TangentLine<double>> lines;
  std::vector<std::string> labels;
  for (int i = 0; i < 7; ++i) {
    const auto [x, d] = oracle::random_tangent(rng);
    lines.emplace_back(x, d);
    labels.push_back("m" + std::to_string(i));
  }
  const LineConfiguration cfg(lines, labels);
  const TripleCensus c = triple_census(cfg);
  CHECK(c.triples.size() == 35);
  CHECK(c.n_degenerate == 0);
  Mat3d mirror = Mat3d::Identity();
  mirror(2, 2) = -1;
  const TripleCensus m = triple_census(apply(SymmetryElement(mirror), cfg));
  CHECK(m.n_plus == c.n_minus);
  CHECK(m.n_minus == c.n_plus);
}

TEST_CASE("empty census") {
  const TripleCensus c = triple_census(LineConfiguration());
  CHECK(c.n_plus == 0);
  CHECK(c.n_minus == 0);
  CHECK(c.n_degenerate == 0);
}

}
