#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "jtprec/baselines.hpp"
#include "jtprec/metrics.hpp"

using namespace jtprec;
using fixtures::cd;

TEST_CASE("zero forcing on an identity channel") {
  const ChannelRealization r = fixtures::realization(2, 2, 1, {{cd(1.0)}, {cd(0.0)}, {cd(0.0)}, {cd(1.0)}});
  const Precoder p = zf_precoder(r, 1.0);
  const auto g = true_sinr(r, p, 1.0);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(weighted_sum_rate(g, {1.0, 1.0}) == doctest::Approx(2.0));
}

TEST_CASE("zero forcing removes all inter-user interference") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario s = fixtures::scenario(4, 2);
    const ChannelRealization r = rescale_for_conditioning(draw_drop(s, seed), 1.0).realization;
    const Precoder p = zf_precoder(r, 2.0);
    CHECK(p.max_antenna_power() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.num_blocks() == r.num_bs * r.num_users);
    for (int u = 0; u < r.num_users; ++u)
      for (int i = 0; i < r.num_users; ++i) {
        cd sum = 0.0;
        for (int b = 0; b < r.num_bs; ++b) sum += (r.channel(b, u) * p.block(b, i)).value();
        if (i == u)
          CHECK(std::abs(sum) > 1e-6);
        else
          CHECK(std::abs(sum) < 1e-9 * std::sqrt(2.0));
      }
  }
}

TEST_CASE("zero forcing rejects too many users and rank deficiency") {
  const Scenario s = fixtures::scenario(4, 1);
  CHECK_THROWS_AS(zf_precoder(draw_drop(s, 1), 1.0), std::invalid_argument);
  const ChannelRealization twin =
      fixtures::realization(2, 2, 1, {{cd(1.0, 1.0)}, {cd(1.0, 1.0)}, {cd(0.5)}, {cd(0.5)}});
  CHECK_THROWS_AS(zf_precoder(twin, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(zf_precoder(fixtures::realization(1, 1, 1, {{cd(1.0)}}), 0.0), std::invalid_argument);
}

TEST_CASE("swarm finds the single-user optimum") {
  const std::vector<cd> h{cd(0.8, 0.3), cd(-0.5, 1.0)};
  const MaskedCsi csi = fixtures::full(fixtures::realization(1, 1, 2, {h}), 0.2, 1.5);
  const double amp = std::abs(h[0]) + std::abs(h[1]);
  const double optimum = std::log2(1.0 + 1.5 * amp * amp / 0.2);
  const DesignResult res = pso_solve(csi, PsoOptions{.mode = SinrMode::kFull});
  CHECK(res.design_rate >= 0.99 * optimum);
  CHECK(res.design_rate <= optimum + 1e-9);
}

TEST_CASE("swarm trace, power and support") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const MaskedCsi csi = fixtures::drop(seed, 3.0, 3, 1);
    PsoOptions o;
    o.iterations = 60;
    o.restarts = 2;
    o.rng_seed = seed;
    const DesignResult res = pso_solve(csi, o);
    REQUIRE(res.trace.objective.size() == 2);
    for (const auto& obj : res.trace.objective) {
      CHECK(obj.size() == 61);
      for (std::size_t i = 1; i < obj.size(); ++i) CHECK(obj[i] >= obj[i - 1]);
    }
    CHECK(res.precoder.support_equals(csi.coop));
    CHECK(res.precoder.satisfies_power(csi.p_max));
    CHECK(res.precoder.max_antenna_power() == doctest::Approx(csi.p_max).epsilon(1e-9));
    CHECK(weighted_sum_rate(pessimistic_sinr(csi, res.precoder), csi.weights) ==
          doctest::Approx(res.design_rate).epsilon(1e-9));

    const DesignResult again = pso_solve(csi, o);
    CHECK(again.design_rate == res.design_rate);
  }
  CHECK_THROWS_AS(pso_solve(fixtures::drop(0, 3.0), PsoOptions{.swarm = 0}), std::invalid_argument);
}
