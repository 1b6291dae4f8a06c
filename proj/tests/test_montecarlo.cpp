#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcp/errors.hpp"
#include "dcp/montecarlo.hpp"
#include "support/test_support.hpp"

using namespace dcp;

TEST_CASE("Gumbel quantile identities") {
  const GumbelSpec unit{1.0, 0.0};
  // u = exp(-1) maps to the mode
  CHECK(gumbel_quantile(unit, std::exp(-1.0)) == doctest::Approx(0.0).epsilon(1e-15));
  const GumbelSpec shifted{2.0, 3.5};
  CHECK(gumbel_quantile(shifted, std::exp(-1.0)) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(gumbel_quantile(unit, 0.0), doctest::Contains("InvalidArgument"),
                       Error);
}

TEST_CASE("Gumbel sample mean approaches Euler's constant") {
  RandomStream rng(3);
  const auto draws = sample_gumbel(GumbelSpec{1.0, 0.0}, rng, 1000000);
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  // variance of a unit Gumbel is pi^2/6
  const double se = std::sqrt((M_PI * M_PI / 6.0) / static_cast<double>(draws.size()));
  CHECK(std::abs(mean - euler_gamma) <= 3.0 * se);
}

TEST_CASE("sampling is deterministic per seed") {
  RandomStream a(42), b(42), c(43);
  const auto da = sample_gumbel(GumbelSpec{1.0, 0.0}, a, 1000);
  const auto db = sample_gumbel(GumbelSpec{1.0, 0.0}, b, 1000);
  const auto dc = sample_gumbel(GumbelSpec{1.0, 0.0}, c, 1000);
  CHECK(da == db);
  CHECK(da != dc);

  const GnlModel ml = make_ml(3, 0.7);
  const std::vector<double> u = {0.1, -0.4, 0.2};
  const McEstimate e1 = mc_surplus_ml(ml, u, 20000, 5);
  const McEstimate e2 = mc_surplus_ml(ml, u, 20000, 5);
  CHECK(e1.mean == e2.mean);
  CHECK(e1.std_error == e2.std_error);
  const SimplexPoint f1 = mc_choice_frequencies(ml, u, 20000, 5);
  const SimplexPoint f2 = mc_choice_frequencies(ml, u, 20000, 5);
  CHECK(f1.values() == f2.values());
}

TEST_CASE("simulated surplus matches the closed form") {
  const GnlModel ml = make_ml(2, 1.0);
  const std::vector<double> zero = {0.0, 0.0};
  const McEstimate est = mc_surplus_ml(ml, zero, 1000000, 17);
  CHECK(std::abs(est.mean - (std::log(2.0) + euler_gamma)) <= 3.0 * est.std_error);

  const GnlModel single = make_ml(1, 1.0);
  const McEstimate one = mc_surplus_ml(single, std::vector<double>{2.5}, 400000, 19);
  CHECK(std::abs(one.mean - (2.5 + euler_gamma)) <= 3.0 * one.std_error);

  // translation moves the estimate by the shift
  const McEstimate base = mc_surplus_ml(ml, zero, 400000, 23);
  const McEstimate moved = mc_surplus_ml(ml, std::vector<double>{5.0, 5.0}, 400000, 29);
  const double se = std::hypot(base.std_error, moved.std_error);
  CHECK(std::abs(moved.mean - base.mean - 5.0) <= 3.0 * se);

  CHECK_THROWS_WITH_AS(mc_surplus_ml(make_nl({{0, 1}, {2}}, {0.5, 1.0}), zero, 10, 1),
                       doctest::Contains("WrongModelKind"), Error);
}

TEST_CASE("choice frequencies match the analytic probabilities") {
  const long long samples = 1000000;
  const GnlModel ml = make_ml(2, 1.0);
  const std::vector<double> u = {std::log(2.0), 0.0};
  const SimplexPoint freq = mc_choice_frequencies(ml, u, samples, 31);
  CHECK(std::abs(freq[0] - 2.0 / 3.0) <= 0.002);
  CHECK(std::abs(freq[1] - 1.0 / 3.0) <= 0.002);

  // symmetric inputs give near-equal frequencies
  const GnlModel ml3 = make_ml(3, 0.5);
  const SimplexPoint sym = mc_choice_frequencies(ml3, std::vector<double>(3, 0.7), samples, 37);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(sym[i] - 1.0 / 3.0) <= 0.002);

  // nested logit two-stage target
  const GnlModel nl = make_nl({{0, 1}, {2}}, {0.5, 1.0});
  const SimplexPoint nlfreq =
      mc_choice_frequencies(nl, std::vector<double>(3, 0.0), samples, 41);
  const SimplexPoint analytic = choice_probabilities(nl, std::vector<double>(3, 0.0));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(nlfreq[i] - analytic[i]) <= 0.002);
  }
}

TEST_CASE("frequencies are normalized counts") {
  RandomStream rng(43);
  const GnlModel model = dcptest::random_gnl(rng, 5, 3);
  const long long samples = 9973;
  const SimplexPoint freq =
      mc_choice_frequencies(model, std::vector<double>(5, 0.0), samples, 47);
  double mass = 0.0;
  for (double f : freq) {
    // each frequency is an integer count over the sample total
    const double count = f * static_cast<double>(samples);
    CHECK(count == doctest::Approx(std::round(count)).epsilon(1e-12));
    mass += f;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));
}
