#include "cylcert/jets.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cylcert;

namespace {

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST_SUITE("jets") {

TEST_CASE("parameter layout") {
  CHECK(PerturbationParams::names().size() == 15);
  CHECK(PerturbationParams::names().front() == "a1-");
  CHECK(PerturbationParams::names().back() == "c3-");
  CHECK(PerturbationParams::index(1, Sign::plus, AxisRole::a) == -1);
  CHECK(PerturbationParams::index(2, Sign::plus, AxisRole::c) == 5);
  const PerturbationParams p = PerturbationParams().with(3, Sign::minus, AxisRole::b, 0.5);
  CHECK(p.get(3, Sign::minus, AxisRole::b) == 0.5);
  CHECK(p.vector()[13] == 0.5);
  CHECK(p.get(1, Sign::plus, AxisRole::c) == 0.0);
  CHECK_THROWS_AS(p.with(1, Sign::plus, AxisRole::b, 1.0), std::invalid_argument);
  CHECK_THROWS(PerturbationParams(Eigen::VectorXd::Zero(14)));
}

TEST_CASE("zero perturbation keeps O6") {
  const LineConfiguration o6 = build_O6();
  const LineConfiguration d = deform(o6, PerturbationParams(), 0.7);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(d[i].touch_point().isApprox(o6[i].touch_point(), 1e-15));
  }
}

TEST_CASE("deformation moves only the chosen line") {
  const LineConfiguration o6 = build_O6();
  const PerturbationParams p = PerturbationParams().with(2, Sign::minus, AxisRole::c, 1.0);
  const LineConfiguration d = deform(o6, p, 0.3);
  for (std::size_t i = 0; i < 6; ++i) {
    const bool moved = !d[i].touch_point().isApprox(o6[i].touch_point(), 1e-12) ||
                       !d[i].direction().isApprox(o6[i].direction(), 1e-12);
    CHECK(moved == (o6.labels()[i] == "l2-"));
  }
}

TEST_CASE("closed-form first differentials match finite differences") {
  std::mt19937_64 rng(1);
  const LineConfiguration o6 = build_O6();
  for (int k = 0; k < 20; ++k) {
    const PerturbationParams p(random_vector(rng, 15));
    const JetTable cf = first_order_closed_form(p);
    const JetTable fd = finite_difference_jets(o6, p, 1);
    REQUIRE(cf.order1.size() == 12);
    CHECK((cf.order1 - fd.order1).cwiseAbs().maxCoeff() < 1e-7);
    for (int g = 0; g < 3; ++g) CHECK(std::abs(cf.order1.segment(4 * g, 4).sum()) < 1e-12);
    CHECK(fd.flagged.empty());
  }
}

TEST_CASE("series jets match finite differences at both orders") {
  std::mt19937_64 rng(2);
  const RotationChart chart = o6_chart();
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd p = random_vector(rng, 15);
    const JetTable se = series_jets(chart, p, o6_pairs());
    const JetTable f1 = finite_difference_jets(chart, p, o6_pairs(), 1);
    const JetTable f2 = finite_difference_jets(chart, p, o6_pairs(), 2);
    CHECK((se.order1 - f1.order1).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((se.order2 - f2.order2).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("series jets on a generic chart") {
  std::mt19937_64 rng(3);
  std::vector<TangentLine<double>> lines;
  for (int i = 0; i < 4; ++i) {
    const auto [x, d] = oracle::random_tangent(rng);
    lines.emplace_back(x, d);
  }
  const LineConfiguration cfg(lines, {"p", "q", "r", "s"});
  const RotationChart chart = local_rotation_chart(cfg, false);
  CHECK(chart.n_vars() == 12);
  const auto pairs = all_pairs(cfg, false);
  CHECK(pairs.size() == 6);
  const Eigen::VectorXd p = random_vector(rng, 12);
  const JetTable se = series_jets(chart, p, pairs);
  const JetTable f1 = finite_difference_jets(chart, p, pairs, 1);
  const JetTable f2 = finite_difference_jets(chart, p, pairs, 2);
  CHECK((se.order1 - f1.order1).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((se.order2 - f2.order2).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("series jets reject parallel pairs") {
  const LineConfiguration c6 = build_C6();
  CHECK_THROWS(series_jets(local_rotation_chart(c6), Eigen::VectorXd::Ones(15), all_pairs(c6, true)));
}

TEST_CASE("pair expansion agrees with series jets") {
  std::mt19937_64 rng(4);
  const RotationChart chart = o6_chart();
  const PairExpansion ex = pair_expansion(chart, o6_pairs());
  CHECK(ex.base.isApprox(Eigen::VectorXd::Ones(12), 1e-12));
  for (int k = 0; k < 5; ++k) {
    const Eigen::VectorXd p = random_vector(rng, 15);
    const JetTable se = series_jets(chart, p, o6_pairs());
    for (Eigen::Index u = 0; u < 12; ++u) {
      CHECK(ex.linear.row(u).dot(p) == doctest::Approx(se.order1[u]).epsilon(1e-10).scale(1.0));
      CHECK(p.dot(ex.quad[static_cast<std::size_t>(u)] * p) == doctest::Approx(se.order2[u]).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("lifted E points have vanishing first differentials") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const EPointParams e = EPointParams::from_vector(random_vector(rng, 6));
    CHECK(first_order_closed_form(e.lift()).order1.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((e_lift_matrix() * e.vector()).isApprox(e.lift().vector()));
  }
}

TEST_CASE("second-order combinations match finite differences") {
  std::mt19937_64 rng(6);
  const LineConfiguration o6 = build_O6();
  for (int k = 0; k < 10; ++k) {
    const Eigen::VectorXd v = random_vector(rng, 6);
    const EPointParams e = EPointParams::from_vector(v);
    const JetTable f2 = finite_difference_jets(o6, e.lift(), 2);
    const auto ups = second_order_combinations(e);
    const auto ref = oracle::upsilon(v);
    for (int a = 0; a < 3; ++a) {
      CHECK(ups[static_cast<std::size_t>(a)] == doctest::Approx(0.5 * f2.order2.segment(4 * a, 4).sum()).epsilon(1e-6).scale(1.0));
      CHECK(ups[static_cast<std::size_t>(a)] == doctest::Approx(ref[static_cast<std::size_t>(a)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("finite differences along an explicit path") {
  // Two lines with direction e2 whose touch points are an angle s apart, so
  // their distance is 2 sin(s / 2).
  const ConfigPath path = [](double t) {
    const double s = M_PI / 3 + t;
    return LineConfiguration({{Vec3d::UnitX(), Vec3d::UnitY()}, {Vec3d(std::cos(s), 0, std::sin(s)), Vec3d::UnitY()}},
                             {"u", "v"});
  };
  const std::vector<LabeledPair> pair{{{0, 1}, "u,v", 0}};
  const JetTable f = finite_difference_jets(path, pair, 2);
  // d^2(s) = 2 - 2 cos(s): first and second Taylor coefficients at pi/3.
  CHECK(finite_difference_jets(path, pair, 1).order1[0] == doctest::Approx(2 * std::sin(M_PI / 3)).epsilon(1e-9));
  CHECK(f.order2[0] == doctest::Approx(std::cos(M_PI / 3)).epsilon(1e-8));
  CHECK(to_string(f.source) == "finite_difference");
}

}
