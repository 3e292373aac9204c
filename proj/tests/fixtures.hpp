#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "jtprec/feedback.hpp"
#include "jtprec/precoder.hpp"
#include "jtprec/random.hpp"
#include "jtprec/scenario.hpp"

namespace fixtures {

using cd = std::complex<double>;

// Realization with explicit channels h[b * U + u] (length n_t each) and
// lambda^2 set to the per-antenna average of |h|^2 unless given.
inline jtprec::ChannelRealization realization(int num_bs, int num_users, int n_t,
                                              const std::vector<std::vector<cd>>& h,
                                              std::vector<double> lambda_sq = {}) {
  jtprec::ChannelRealization r;
  r.num_bs = num_bs;
  r.num_users = num_users;
  r.n_t = n_t;
  r.bs_positions.resize(static_cast<std::size_t>(num_bs));
  r.user_positions.resize(static_cast<std::size_t>(num_users));
  r.lambda_sq.resize(num_bs, num_users);
  for (int b = 0; b < num_bs; ++b)
    for (int u = 0; u < num_users; ++u) {
      const auto& row = h[static_cast<std::size_t>(b * num_users + u)];
      Eigen::RowVectorXcd v(n_t);
      for (int k = 0; k < n_t; ++k) v[k] = row[static_cast<std::size_t>(k)];
      r.h.push_back(v);
      r.lambda_sq(b, u) = lambda_sq.empty() ? v.squaredNorm() / n_t
                                            : lambda_sq[static_cast<std::size_t>(b * num_users + u)];
    }
  return r;
}

inline jtprec::MaskedCsi masked(const jtprec::ChannelRealization& r,
                                const jtprec::CooperationMap& coop, double noise = 1.0,
                                double p_max = 1.0) {
  return jtprec::mask_csi(r, coop, noise, p_max,
                          std::vector<double>(static_cast<std::size_t>(r.num_users), 1.0));
}

inline jtprec::MaskedCsi full(const jtprec::ChannelRealization& r, double noise = 1.0,
                              double p_max = 1.0) {
  return masked(r, jtprec::CooperationMap::full(r.num_bs, r.num_users), noise, p_max);
}

inline jtprec::MaskedCsi single_user(cd h, double noise = 1.0, double p_max = 1.0) {
  return full(realization(1, 1, 1, {{h}}), noise, p_max);
}

// Default cluster drop, optionally with a different size.
inline jtprec::Scenario scenario(int num_users = 3, int n_t = 1, double snr_db = 15.0) {
  jtprec::Config c = jtprec::default_scenario_config();
  c.set("num_users", std::to_string(num_users));
  c.set("n_t", std::to_string(n_t));
  c.set("cell_edge_snr_db", std::to_string(snr_db));
  c.set("user_weights", "1");
  return jtprec::build_scenario(c);
}

inline jtprec::MaskedCsi drop(std::uint64_t seed, double threshold_db, int num_users = 3,
                              int n_t = 1, jtprec::ChannelRealization* out = nullptr) {
  const jtprec::Scenario sc = scenario(num_users, n_t);
  const jtprec::ChannelRealization r = jtprec::draw_drop(sc, seed);
  if (out) *out = r;
  return jtprec::mask_csi(r, jtprec::relative_threshold(r, threshold_db), sc);
}

// Random precoder on the map, each antenna within p_max.
inline jtprec::Precoder random_precoder(const jtprec::CooperationMap& coop, int n_t, double p_max,
                                        jtprec::Rng& rng) {
  jtprec::Precoder p = jtprec::Precoder::zeros(coop, n_t);
  for (int u = 0; u < coop.num_users; ++u)
    for (int b : coop.serving[static_cast<std::size_t>(u)])
      for (int k = 0; k < n_t; ++k) p.block(b, u)[k] = jtprec::complex_normal(rng);
  const double loudest = p.max_antenna_power();
  std::uniform_real_distribution<double> level(0.1, 1.0);
  if (loudest > 0.0) p.scale(std::sqrt(level(rng) * p_max / loudest));
  return p;
}

}  // namespace fixtures
