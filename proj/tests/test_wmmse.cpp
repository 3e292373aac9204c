#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "jtprec/metrics.hpp"
#include "jtprec/wmmse.hpp"

using namespace jtprec;
using fixtures::cd;

namespace {

struct Receivers {
  std::vector<cd> a;
  std::vector<double> d;
};

Receivers receivers_for(const MaskedCsi& csi, const Precoder& p, SinrMode mode) {
  Receivers r;
  for (int u = 0; u < csi.num_users; ++u) {
    const cd a = mmse_receiver(csi, p, u, mode);
    r.a.push_back(a);
    r.d.push_back(linearizing_coefficient(user_mse(csi, p, a, u, mode)));
  }
  return r;
}

double weighted_mse(const MaskedCsi& csi, const Precoder& p, const Receivers& rx, SinrMode mode) {
  double f = 0.0;
  for (int u = 0; u < csi.num_users; ++u) {
    const auto su = static_cast<std::size_t>(u);
    f += csi.weights[su] * rx.d[su] * user_mse(csi, p, rx.a[su], u, mode);
  }
  return f;
}

Precoder axpy(const Precoder& x, double s, const Precoder& y) {
  Precoder out = x;
  for (std::size_t i = 0; i < out.w.size(); ++i)
    if (out.w[i].size() > 0) out.w[i] += s * y.w[i];
  return out;
}

}  // namespace

TEST_CASE("single user: matched filter at full power") {
  const std::vector<cd> h{cd(1.0, -0.4), cd(-0.2, 0.9)};
  const ChannelRealization r = fixtures::realization(1, 1, 2, {h});
  const MaskedCsi csi = fixtures::full(r, 0.5, 3.0);
  const DesignResult res = wmmse_solve(csi, WmmseOptions{.mode = SinrMode::kFull});
  const double amp = std::abs(h[0]) + std::abs(h[1]);
  CHECK(res.design_rate == doctest::Approx(std::log2(1.0 + 3.0 * amp * amp / 0.5)).epsilon(1e-3));
  for (int k = 0; k < 2; ++k) CHECK(res.precoder.antenna_power(0, k) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("all-zero receivers give the zero precoder") {
  const MaskedCsi csi = fixtures::drop(1, 3.0);
  const SubproblemResult s =
      wmmse_subproblem(csi, std::vector<cd>(3, 0.0), std::vector<double>(3, 1.0), SinrMode::kLimitedLambda);
  CHECK(s.status == conic::SolveStatus::kOptimal);
  CHECK(s.precoder.support_equals(csi.coop));
  CHECK(s.precoder.max_antenna_power() == 0.0);
  CHECK_THROWS_AS(wmmse_subproblem(csi, std::vector<cd>(3, 1.0), std::vector<double>(3, 0.0),
                                   SinrMode::kLimitedLambda),
                  std::invalid_argument);
}

TEST_CASE("subproblem solution is stationary along every feasible direction") {
  Rng rng(31);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MaskedCsi csi = rescale_for_conditioning(fixtures::drop(seed, 3.0, 3, 2)).csi;
    const SinrMode mode = SinrMode::kLimitedLambda;
    const Receivers rx = receivers_for(csi, fixtures::random_precoder(csi.coop, 2, csi.p_max, rng), mode);
    const SubproblemResult s = wmmse_subproblem(csi, rx.a, rx.d, mode);
    REQUIRE(s.status == conic::SolveStatus::kOptimal);
    CHECK(s.precoder.satisfies_power(csi.p_max));
    CHECK(s.precoder.support_equals(csi.coop));

    const double f0 = weighted_mse(csi, s.precoder, rx, mode);
    for (int k = 0; k < 20; ++k) {
      // z - w points into the feasible set for any feasible z.
      const Precoder z = fixtures::random_precoder(csi.coop, 2, csi.p_max, rng);
      Precoder dir = axpy(z, -1.0, s.precoder);
      double norm = 0.0;
      for (const auto& blk : dir.w) norm += blk.squaredNorm();
      // Unit length once the precoder is measured in units of sqrt(p_max).
      dir.scale(std::sqrt(csi.p_max / norm));
      const double h = 1e-5;
      const double slope = (weighted_mse(csi, axpy(s.precoder, h, dir), rx, mode) -
                            weighted_mse(csi, axpy(s.precoder, -h, dir), rx, mode)) /
                           (2.0 * h);
      INFO("f0 = " << f0 << ", direction " << k);
      // A 1e-8 duality gap leaves the iterate about sqrt(1e-8) from the minimizer.
      CHECK(slope >= -1e-4 * std::max(1.0, std::abs(f0)));
    }
  }
}

TEST_CASE("metric never decreases and the fixed point identities hold") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const MaskedCsi csi = fixtures::drop(seed, 3.0, 3, 1);
    WmmseOptions o;
    o.restarts = 2;
    o.rng_seed = seed;
    const DesignResult res = wmmse_solve(csi, o);
    REQUIRE(res.trace.objective.size() == 2);
    for (const auto& obj : res.trace.objective)
      for (std::size_t i = 1; i < obj.size(); ++i) CHECK(obj[i] >= obj[i - 1] - 1e-7 * std::max(1.0, obj[i - 1]));

    // With a = MMSE receiver and d = 1 / xi, -log2 xi equals log2(1 + SINR).
    const auto gamma = pessimistic_sinr(csi, res.precoder);
    double metric = 0.0;
    for (int u = 0; u < csi.num_users; ++u) {
      const cd a = mmse_receiver(csi, res.precoder, u);
      const double xi = user_mse(csi, res.precoder, a, u);
      CHECK(xi == doctest::Approx(1.0 / (1.0 + gamma[static_cast<std::size_t>(u)])).epsilon(1e-9));
      CHECK(linearizing_coefficient(xi) == doctest::Approx(1.0 + gamma[static_cast<std::size_t>(u)]).epsilon(1e-9));
      metric -= csi.weights[static_cast<std::size_t>(u)] * std::log2(xi);
    }
    CHECK(metric == doctest::Approx(res.design_rate).epsilon(1e-9));
    CHECK(res.design_rate == doctest::Approx(res.trace.restart_best[static_cast<std::size_t>(res.trace.best_restart)]).epsilon(1e-9));
    CHECK(res.precoder.satisfies_power(csi.p_max));
    CHECK(res.precoder.support_equals(csi.coop));
  }
}

TEST_CASE("one more update cannot improve on the returned receivers") {
  const MaskedCsi csi = fixtures::drop(2, 3.0, 3, 1);
  const DesignResult res = wmmse_solve(csi, {});
  const Receivers rx = receivers_for(csi, res.precoder, SinrMode::kLimitedLambda);
  const double f = weighted_mse(csi, res.precoder, rx, SinrMode::kLimitedLambda);
  Rng rng(4);
  for (int u = 0; u < csi.num_users; ++u)
    for (int k = 0; k < 5; ++k) {
      Receivers moved = rx;
      moved.a[static_cast<std::size_t>(u)] += 0.01 * complex_normal(rng) * std::abs(rx.a[static_cast<std::size_t>(u)]);
      CHECK(weighted_mse(csi, res.precoder, moved, SinrMode::kLimitedLambda) >= f - 1e-12);
    }
}

TEST_CASE("option validation") {
  const MaskedCsi csi = fixtures::drop(1, 3.0);
  CHECK_THROWS_AS(wmmse_solve(csi, WmmseOptions{.max_iter = 0}), std::invalid_argument);
  CHECK_THROWS_AS(wmmse_solve(csi, WmmseOptions{.rel_tol = 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(wmmse_solve(csi, WmmseOptions{.restarts = 0}), std::invalid_argument);
}
