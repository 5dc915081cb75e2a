#include "cylcert/certify.hpp"
#include "cylcert/search.hpp"

#include <doctest.h>

using namespace cylcert;

TEST_SUITE("search") {

TEST_CASE("gain is zero at the base point direction scale zero") {
  const RotationChart chart = o6_chart();
  CHECK(min_distance_gain(chart, Eigen::VectorXd::Ones(15), 0.0, true) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS(min_distance_gain(chart, Eigen::VectorXd::Zero(15), 0.1, true));
}

TEST_CASE("exponent fit") {
  const std::vector<double> ts{1e-3, 1e-2, 1e-1};
  CHECK(fit_exponent(ts, {3e-6, 3e-4, 3e-2}) == doctest::Approx(2.0));
  CHECK(fit_exponent(ts, {5e-3, 5e-2, 5e-1}) == doctest::Approx(1.0));
  CHECK_THROWS(fit_exponent({1e-3, 1e-2}, {1e-6, 1e-4}));
  CHECK(std::isnan(fit_exponent(ts, {1.0, -1.0, 1.0})));
}

TEST_CASE("tangent actions form a representation") {
  const LineConfiguration o6 = build_O6();
  // With the first line pinned the chart is transverse to global rotations,
  // so the action is exact rather than defined up to them.
  const RotationChart chart = local_rotation_chart(o6);
  std::vector<Eigen::MatrixXd> mats;
  for (const auto& g : symmetry_group(o6)) {
    const auto perm = symmetry_orbit_check(o6, g);
    REQUIRE(perm.has_value());
    mats.push_back(tangent_action(chart, g.matrix(), *perm));
  }
  bool has_identity = false;
  for (const auto& m : mats) has_identity = has_identity || m.isIdentity(1e-8);
  CHECK(has_identity);
  for (std::size_t i = 0; i < mats.size(); i += 5) {
    for (std::size_t j = 0; j < mats.size(); j += 7) {
      const Eigen::MatrixXd prod = mats[i] * mats[j];
      double best = 1e300;
      for (const auto& m : mats) best = std::min(best, (prod - m).cwiseAbs().maxCoeff());
      CHECK(best < 1e-6);
    }
  }
}

TEST_CASE("symmetric subspaces of C6") {
  const auto subs = symmetric_subspaces(local_rotation_chart(build_C6(), false));
  CHECK_FALSE(subs.empty());
  for (const auto& s : subs) CHECK((s.transpose() * s).isIdentity(1e-9));
}

TEST_CASE("O6 cannot be unlocked with a few seeds") {
  UnlockOptions opt;
  opt.seeds = 6;
  opt.iters = 100;
  const UnlockResult r = unlock_search(o6_chart(), opt);
  CHECK(r.base_value == doctest::Approx(1.0));
  CHECK(r.best_gain <= 1e-9);
  CHECK(r.evaluations > 0);
}

TEST_CASE("unlock search is reproducible") {
  UnlockOptions opt;
  opt.seeds = 3;
  opt.iters = 50;
  opt.seed = 4;
  const UnlockResult a = unlock_search(o6_chart(), opt);
  const UnlockResult b = unlock_search(o6_chart(), opt);
  CHECK(a.best_gain == b.best_gain);
  CHECK(a.best_direction == b.best_direction);
}

TEST_CASE("default setups") {
  const UnlockSetup o = default_unlock_setup(build_O6());
  CHECK(o.chart.n_vars() == 15);
  CHECK(o.options.skip_parallel);
  const UnlockSetup c = default_unlock_setup(build_C6());
  CHECK(c.chart.n_vars() == 18);
  CHECK_FALSE(c.options.skip_parallel);
  CHECK(c.options.symmetry_seeding);
}

TEST_CASE("decay exponents on O6") {
  DecayOptions opt;
  opt.directions = 10;
  const DecayReport rep = decay_probe(o6_chart(), kernel_subspace(o6_jet_family()), opt);
  CHECK(rep.fits.size() == 20);
  CHECK(rep.min_exponent(true) > 1.9);
  CHECK(rep.max_exponent(true) < 2.1);
  CHECK(rep.min_exponent(false) > 0.9);
  CHECK(rep.max_exponent(false) < 1.1);
  CHECK(rep.c_d > 0);
  CHECK(rep.c_d <= rep.c_u);
}

}
