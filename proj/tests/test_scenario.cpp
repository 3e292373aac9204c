#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "jtprec/metrics.hpp"
#include "jtprec/scenario.hpp"

using namespace jtprec;

TEST_CASE("noise power is kTB") {
  CHECK(noise_power(290, 1e7) == doctest::Approx(4.002e-14).epsilon(1e-12));
  CHECK(noise_power(580, 1e7) == doctest::Approx(8.004e-14).epsilon(1e-12));
  CHECK(noise_power(290, 1e-300) < 1e-320);
}

TEST_CASE("default scenario is valid and keeps the weights") {
  const Scenario s = build_scenario(default_scenario_config());
  CHECK(s.num_bs == 3);
  CHECK(s.n_t == 1);
  CHECK(s.num_users == 3);
  CHECK(s.shadow_sigma_db == 8.0);
  CHECK(s.user_weights == std::vector<double>{1, 1, 1});
  CHECK(s.noise_power == doctest::Approx(4.002e-14).epsilon(1e-12));
  CHECK(s.p_max > 0.0);

  Config c = default_scenario_config();
  c.set("user_weights", "1,2,0.5");
  CHECK(build_scenario(c).user_weights == std::vector<double>{1, 2, 0.5});
}

TEST_CASE("configuration errors name the key") {
  auto key_of = [](const std::string& k, const std::string& v) {
    Config c = default_scenario_config();
    c.set(k, v);
    try {
      build_scenario(c);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("none");
  };
  CHECK(key_of("num_users", "0") == "num_users");
  CHECK(key_of("num_bs", "-1") == "num_bs");
  CHECK(key_of("user_weights", "1,-1,1") == "user_weights");
  CHECK(key_of("drop_radius_m", "600") == "drop_radius_m");
  CHECK(key_of("cell_edge_snr_db", "-inf") == "cell_edge_snr_db");

  Config missing;
  missing.set("num_bs", "3");
  CHECK_THROWS_AS(build_scenario(missing), ConfigError);
}

TEST_CASE("power calibration reproduces the edge SNR") {
  Config c = default_scenario_config();
  for (double snr : {0.0, 15.0, 27.5}) {
    c.set("cell_edge_snr_db", std::to_string(snr));
    const Scenario s = build_scenario(c);
    const double edge = 10.0 * std::log10(s.p_max * pathloss_gain(s.cell_radius, 3.5) / s.noise_power);
    CHECK(edge == doctest::Approx(snr).epsilon(1e-12).scale(1.0));
  }
  c.set("cell_edge_snr_db", "0");
  const Scenario unit = build_scenario(c);
  CHECK(unit.p_max == doctest::Approx(unit.noise_power / pathloss_gain(500.0, 3.5)));
}

TEST_CASE("drops are deterministic in the seed") {
  const Scenario s = fixtures::scenario();
  const ChannelRealization a = draw_drop(s, 42);
  const ChannelRealization b = draw_drop(s, 42);
  const ChannelRealization c = draw_drop(s, 43);
  bool same = true;
  for (std::size_t i = 0; i < a.h.size(); ++i) same = same && a.h[i] == b.h[i];
  CHECK(same);
  CHECK(a.lambda_sq == b.lambda_sq);
  CHECK(a.lambda_sq != c.lambda_sq);
}

TEST_CASE("geometry: BSs on the circle, users inside the drop disk") {
  const Scenario s = fixtures::scenario(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelRealization r = draw_drop(s, seed);
    for (const Point2& p : r.bs_positions) CHECK(std::hypot(p.x, p.y) == doctest::Approx(500.0));
    for (const Point2& p : r.user_positions) CHECK(std::hypot(p.x, p.y) <= 50.0 + 1e-9);
  }
}

TEST_CASE("no shadowing and a user at the center give equal long-term gains") {
  Config c = default_scenario_config();
  c.set("shadow_sigma_db", "0");
  c.set("drop_radius_m", "0");
  const ChannelRealization r = draw_drop(build_scenario(c), 7);
  for (int u = 0; u < r.num_users; ++u)
    for (int b = 1; b < r.num_bs; ++b) CHECK(r.lambda_sq(b, u) == doctest::Approx(r.lambda_sq(0, u)));
}

TEST_CASE("fast fading has unit per-antenna power") {
  const ChannelRealization base = draw_drop(fixtures::scenario(1, 2), 3);
  const int draws = 100000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ChannelRealization r = redraw_fading(base, static_cast<std::uint64_t>(i));
    sum += r.channel(0, 0).squaredNorm() / base.lambda_sq(0, 0);
  }
  const double mean = sum / draws;
  INFO("mean ||h||^2 / lambda^2 = " << mean);
  CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
  CHECK(mean / 2.0 >= 0.98);
  CHECK(mean / 2.0 <= 1.02);
}

TEST_CASE("rescaling: single weak link becomes unit gain") {
  const ChannelRealization r =
      fixtures::realization(1, 1, 1, {{std::sqrt(1e-13)}}, {1e-13});
  const RescaledRealization s = rescale_for_conditioning(r, 1.0);
  CHECK(s.realization.lambda_sq(0, 0) == doctest::Approx(1.0));
  CHECK(std::norm(s.realization.channel(0, 0)[0]) == doctest::Approx(1.0));
  CHECK(s.noise_power == doctest::Approx(1e13));
}

TEST_CASE("rescaling leaves every SINR unchanged") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    ChannelRealization r;
    const MaskedCsi csi = fixtures::drop(static_cast<std::uint64_t>(trial), 3.0, 3, 2, &r);
    const Scenario sc = fixtures::scenario(3, 2);
    const Precoder p = fixtures::random_precoder(csi.coop, 2, csi.p_max, rng);

    const RescaledRealization rr = rescale_for_conditioning(r, csi.noise_power);
    const auto before = true_sinr(r, p, csi.noise_power);
    const auto after = true_sinr(rr.realization, p, rr.noise_power);
    const RescaledCsi rc = rescale_for_conditioning(csi);
    CHECK(rc.factor == doctest::Approx(rr.factor));
    const auto pess_before = pessimistic_sinr(csi, p);
    const auto pess_after = pessimistic_sinr(rc.csi, p);
    for (std::size_t u = 0; u < before.size(); ++u) {
      CHECK(std::abs(after[u] - before[u]) <= 1e-10 * before[u]);
      CHECK(std::abs(pess_after[u] - pess_before[u]) <= 1e-10 * pess_before[u]);
    }
    (void)sc;
  }
}
