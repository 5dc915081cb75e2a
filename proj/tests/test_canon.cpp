#include "cylcert/canon.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace cylcert;

namespace {

bool same_distance_multiset(const LineConfiguration& a, const LineConfiguration& b) {
  std::multiset<long long> sa, sb;
  const Eigen::MatrixXd ta = distance_table(a), tb = distance_table(b);
  for (Eigen::Index i = 0; i < ta.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < ta.cols(); ++j) {
      sa.insert(std::llround(ta(i, j) * 1e9));
      sb.insert(std::llround(tb(i, j) * 1e9));
    }
  }
  return sa == sb;
}

}  // namespace

TEST_SUITE("canon") {

TEST_CASE("O6 distances") {
  const LineConfiguration o6 = build_O6();
  REQUIRE(o6.size() == 6);
  CHECK(o6.labels() == o6_labels());
  const Eigen::MatrixXd t = distance_table(o6);
  int ones = 0, twos = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      const double d = t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (o6.is_declared_parallel(i, j)) {
        CHECK(std::abs(d - 2.0) < 1e-12);
        ++twos;
      } else {
        CHECK(std::abs(d - 1.0) < 1e-12);
        ++ones;
      }
    }
  }
  CHECK(ones == 12);
  CHECK(twos == 3);
  CHECK(min_distance(o6, true).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_distance(o6, true).minimizers.size() == 12);
  CHECK(min_distance(o6, false).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_canonical_o6(o6));
  CHECK_FALSE(is_canonical_o6(build_O6_alternative()));
}

TEST_CASE("O6 lines are tangent and their pair distances match brute force") {
  const LineConfiguration o6 = build_O6();
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      if (o6.is_declared_parallel(i, j)) continue;
      const double ref = oracle::brute_line_distance_sq(o6[i].touch_point(), o6[i].direction(), o6[j].touch_point(),
                                                        o6[j].direction());
      CHECK(std::sqrt(ref) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("C6 distances") {
  const LineConfiguration c6 = build_C6();
  const MinDistance md = min_distance(c6, false);
  CHECK(md.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(md.minimizers.size() == 6);
  for (const auto& p : md.minimizers) {
    const auto gap = (p.second + 6 - p.first) % 6;
    CHECK((gap == 1 || gap == 5));
  }
  CHECK(c6.parallel_pairs().size() == 3);
}

TEST_CASE("the alternative O6 has the same distance pattern") {
  CHECK(same_distance_multiset(build_O6(), build_O6_alternative()));
  CHECK(symmetry_group(build_O6_alternative()).size() == symmetry_group(build_O6()).size());
}

TEST_CASE("radius and distance are inverse") {
  for (const double d : {0.0, 0.3, 1.0, 1.7}) {
    CHECK(distance_from_radius(radius_from_distance(d)) == doctest::Approx(d).epsilon(1e-14));
  }
  CHECK(radius_from_distance(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(radius_from_distance(2.0), std::domain_error);
  CHECK_THROWS_AS(radius_from_distance(-0.1), std::domain_error);
  CHECK_THROWS_AS(distance_from_radius(-1.0), std::domain_error);
}

TEST_CASE("symmetry groups") {
  CHECK(signed_permutations().size() == 48);
  for (const auto& g : signed_permutations()) {
    CHECK((g.matrix() * g.matrix().transpose()).isIdentity(1e-15));
  }
  CHECK(generate_group({cyclic_rotation()}).size() == 3);
  CHECK(generate_group({cyclic_rotation(), half_turn_x()}).size() == 12);
  CHECK(central_reflection().parity() == -1);

  for (const auto& cfg : {build_O6(), build_C6()}) {
    const auto group = symmetry_group(cfg);
    CHECK(group.size() == 24);
    const Eigen::MatrixXd t = distance_table(cfg);
    for (const auto& g : group) {
      const auto perm = symmetry_orbit_check(cfg, g);
      REQUIRE(perm.has_value());
      for (std::size_t i = 0; i < cfg.size(); ++i) {
        for (std::size_t j = 0; j < cfg.size(); ++j) {
          CHECK(t((*perm)[i], (*perm)[j]) == doctest::Approx(t(i, j)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("a generic rotation is not a symmetry") {
  const Rotation<double> r(Vec3d(1, 2, 3), 0.4);
  CHECK_FALSE(symmetry_orbit_check(build_O6(), SymmetryElement(r.matrix())).has_value());
}

TEST_CASE("configuration construction") {
  const std::vector<TangentLine<double>> two{{Vec3d::UnitX(), Vec3d::UnitZ()}, {-Vec3d::UnitX(), Vec3d::UnitY()}};
  CHECK_THROWS(LineConfiguration(two, {"a", "a"}));
  CHECK_THROWS(LineConfiguration(two, {"a"}));
  CHECK_THROWS(LineConfiguration(two, {"a", "b"}, {{0, 5}}));
  const LineConfiguration cfg(two, {"a", "b"});
  CHECK(cfg.index_of("b") == std::optional<std::size_t>(1));
  CHECK_FALSE(cfg.index_of("c").has_value());
  CHECK(min_distance(cfg, false).value == doctest::Approx(2.0));
  CHECK_THROWS(min_distance(LineConfiguration({two[0]}, {"a"}), false));
}

}
