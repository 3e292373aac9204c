#include "jtprec/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jtprec {

bool CooperationMap::complete() const {
  return std::all_of(member_.begin(), member_.end(), [](char c) { return c != 0; });
}

int CooperationMap::num_links() const {
  return static_cast<int>(std::count(member_.begin(), member_.end(), char{1}));
}

CooperationMap CooperationMap::from_serving(int num_bs, std::vector<std::vector<int>> serving,
                                            double threshold_db) {
  CooperationMap m;
  m.num_bs = num_bs;
  m.num_users = static_cast<int>(serving.size());
  m.threshold_db = threshold_db;
  m.member_.assign(static_cast<std::size_t>(num_bs * m.num_users), 0);
  m.served.assign(static_cast<std::size_t>(num_bs), {});
  for (int u = 0; u < m.num_users; ++u) {
    auto& set = serving[static_cast<std::size_t>(u)];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.empty()) throw std::invalid_argument("cooperation set of a user is empty");
    for (int b : set) {
      if (b < 0 || b >= num_bs) throw std::invalid_argument("BS index out of range");
      m.member_[static_cast<std::size_t>(b * m.num_users + u)] = 1;
      m.served[static_cast<std::size_t>(b)].push_back(u);
    }
  }
  m.serving = std::move(serving);
  return m;
}

CooperationMap CooperationMap::full(int num_bs, int num_users) {
  std::vector<std::vector<int>> serving(static_cast<std::size_t>(num_users));
  for (auto& s : serving)
    for (int b = 0; b < num_bs; ++b) s.push_back(b);
  return from_serving(num_bs, std::move(serving), std::numeric_limits<double>::infinity());
}

const Eigen::RowVectorXcd& MaskedCsi::channel(int b, int u) const {
  if (!coop.contains(b, u)) throw std::out_of_range("channel not fed back for this link");
  return known[static_cast<std::size_t>(b * num_users + u)];
}

CooperationMap relative_threshold(const ChannelRealization& r, double threshold_db) {
  if (std::isnan(threshold_db) || threshold_db < 0.0)
    throw std::invalid_argument("relative threshold must be >= 0 or inf");
  std::vector<std::vector<int>> serving(static_cast<std::size_t>(r.num_users));
  for (int u = 0; u < r.num_users; ++u) {
    // Long-term average power E||h||^2 = N_T * lambda^2, compared in dB.
    std::vector<double> level_db(static_cast<std::size_t>(r.num_bs));
    for (int b = 0; b < r.num_bs; ++b)
      level_db[static_cast<std::size_t>(b)] = 10.0 * std::log10(r.n_t * r.lambda_sq(b, u));
    const double best = *std::max_element(level_db.begin(), level_db.end());
    for (int b = 0; b < r.num_bs; ++b)
      if (best - level_db[static_cast<std::size_t>(b)] <= threshold_db)
        serving[static_cast<std::size_t>(u)].push_back(b);
  }
  return CooperationMap::from_serving(r.num_bs, std::move(serving), threshold_db);
}

MaskedCsi mask_csi(const ChannelRealization& r, const CooperationMap& coop, double noise_power,
                   double p_max, std::vector<double> weights) {
  if (coop.num_bs != r.num_bs || coop.num_users != r.num_users)
    throw std::invalid_argument("cooperation map does not match the realization");
  if (static_cast<int>(weights.size()) != r.num_users)
    throw std::invalid_argument("one weight per user expected");
  MaskedCsi m;
  m.num_bs = r.num_bs;
  m.n_t = r.n_t;
  m.num_users = r.num_users;
  m.known.resize(r.h.size());
  for (int b = 0; b < r.num_bs; ++b)
    for (int u = 0; u < r.num_users; ++u)
      if (coop.contains(b, u)) m.known[static_cast<std::size_t>(r.link(b, u))] = r.channel(b, u);
  m.lambda_sq = r.lambda_sq;
  m.coop = coop;
  m.noise_power = noise_power;
  m.p_max = p_max;
  m.weights = std::move(weights);
  return m;
}

MaskedCsi mask_csi(const ChannelRealization& r, const CooperationMap& coop,
                   const Scenario& scenario) {
  return mask_csi(r, coop, scenario.noise_power, scenario.p_max, scenario.user_weights);
}

BackhaulLoad backhaul_load(const CooperationMap& coop, int n_t) {
  long long links = 0;
  for (const auto& s : coop.serving) links += static_cast<long long>(s.size());
  // One fed-back coefficient and one precoding weight per active antenna link.
  return {links * n_t, links * n_t};
}

RescaledCsi rescale_for_conditioning(const MaskedCsi& csi) {
  if (csi.lambda_sq.size() == 0) throw std::invalid_argument("rescale_for_conditioning: no links");
  RescaledCsi out;
  double weakest = 0.0;
  for (Eigen::Index i = 0; i < csi.lambda_sq.size(); ++i) {
    const double g = csi.lambda_sq.data()[i];
    if (g > 0.0 && (weakest == 0.0 || g < weakest)) weakest = g;
  }
  out.factor = weakest > 0.0 ? std::sqrt(weakest) : 1.0;
  out.csi = csi;
  for (auto& row : out.csi.known)
    if (row.size() > 0) row /= out.factor;
  out.csi.lambda_sq /= out.factor * out.factor;
  out.csi.noise_power /= out.factor * out.factor;
  return out;
}

}  // namespace jtprec
