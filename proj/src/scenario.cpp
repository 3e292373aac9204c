#include "jtprec/scenario.hpp"

#include <cmath>
#include <numbers>

#include "jtprec/random.hpp"

namespace jtprec {

void Scenario::validate() const {
  if (num_bs < 1) throw ConfigError("num_bs", "must be >= 1");
  if (n_t < 1) throw ConfigError("n_t", "must be >= 1");
  if (num_users < 1) throw ConfigError("num_users", "must be >= 1");
  if (!(cell_radius > 0.0)) throw ConfigError("cell_radius_m", "must be > 0");
  if (!(drop_radius >= 0.0)) throw ConfigError("drop_radius_m", "must be >= 0");
  if (!(drop_radius < cell_radius))
    throw ConfigError("drop_radius_m", "must be smaller than cell_radius_m");
  if (!(shadow_sigma_db >= 0.0)) throw ConfigError("shadow_sigma_db", "must be >= 0");
  if (!(pathloss_exponent > 0.0)) throw ConfigError("pathloss_exponent", "must be > 0");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw ConfigError("noise_power_w", "must be > 0");
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw ConfigError("p_max_w", "must be > 0");
  if (static_cast<int>(user_weights.size()) != num_users)
    throw ConfigError("user_weights", "expected one weight per user");
  for (double a : user_weights)
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("user_weights", "weights must be >= 0");
}

Config default_scenario_config() {
  Config c;
  c.set("num_bs", "3");
  c.set("n_t", "1");
  c.set("num_users", "3");
  c.set("cell_radius_m", "500");
  c.set("drop_radius_m", "50");
  c.set("cell_edge_snr_db", "15");
  c.set("shadow_sigma_db", "8");
  c.set("pathloss_exponent", "3.5");
  c.set("bandwidth_hz", "10e6");
  c.set("temperature_k", "290");
  c.set("user_weights", "1");
  c.set("seed", "1");
  return c;
}

double noise_power(double temperature_k, double bandwidth_hz) {
  if (!(temperature_k > 0.0)) throw ConfigError("temperature_k", "must be > 0");
  if (!(bandwidth_hz >= 0.0)) throw ConfigError("bandwidth_hz", "must be >= 0");
  return kBoltzmann * temperature_k * bandwidth_hz;
}

double pathloss_gain(double distance_m, double exponent) {
  return std::pow(std::max(distance_m, 1.0), -exponent);
}

double calibrate_power(const Scenario& s) {
  if (!std::isfinite(s.cell_edge_snr_db))
    throw ConfigError("cell_edge_snr_db", "must be finite so that P_max > 0");
  const double snr = std::pow(10.0, s.cell_edge_snr_db / 10.0);
  return snr * s.noise_power / pathloss_gain(s.cell_radius, s.pathloss_exponent);
}

Scenario build_scenario(const Config& config) {
  Scenario s;
  auto positive_int = [&](const char* key) {
    const long long v = config.get_int(key);
    if (v < 1 || v > 1'000'000) throw ConfigError(key, "must be a positive count");
    return static_cast<int>(v);
  };
  s.num_bs = positive_int("num_bs");
  s.n_t = positive_int("n_t");
  s.num_users = positive_int("num_users");
  s.cell_radius = config.get_double("cell_radius_m");
  s.drop_radius = config.get_double("drop_radius_m");
  s.cell_edge_snr_db = config.get_double("cell_edge_snr_db");
  s.shadow_sigma_db = config.get_double("shadow_sigma_db");
  s.pathloss_exponent = config.get_double("pathloss_exponent");
  const double bandwidth = config.get_double("bandwidth_hz");
  const double temperature = config.get_double("temperature_k");

  std::vector<double> weights = config.get_doubles("user_weights");
  if (weights.size() == 1) weights.assign(static_cast<std::size_t>(s.num_users), weights[0]);
  s.user_weights = weights;
  for (double a : s.user_weights)
    if (!(a >= 0.0)) throw ConfigError("user_weights", "weights must be >= 0");

  s.noise_power = config.has("noise_power_w") ? config.get_double("noise_power_w")
                                              : noise_power(temperature, bandwidth);
  if (!(s.noise_power > 0.0)) throw ConfigError("noise_power_w", "must be > 0");
  s.p_max = config.has("p_max_w") ? config.get_double("p_max_w") : calibrate_power(s);
  s.validate();
  return s;
}

ChannelRealization draw_drop(const Scenario& s, std::uint64_t seed) {
  s.validate();
  ChannelRealization r;
  r.num_bs = s.num_bs;
  r.n_t = s.n_t;
  r.num_users = s.num_users;
  r.seed = seed;
  Rng rng(seed);

  for (int b = 0; b < s.num_bs; ++b) {
    const double angle = 2.0 * std::numbers::pi * b / s.num_bs;
    r.bs_positions.push_back({s.cell_radius * std::cos(angle), s.cell_radius * std::sin(angle)});
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int u = 0; u < s.num_users; ++u) {
    const double rad = s.drop_radius * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    r.user_positions.push_back({rad * std::cos(angle), rad * std::sin(angle)});
  }

  std::normal_distribution<double> shadow(0.0, 1.0);
  r.lambda_sq.resize(s.num_bs, s.num_users);
  for (int b = 0; b < s.num_bs; ++b)
    for (int u = 0; u < s.num_users; ++u) {
      const double dx = r.bs_positions[static_cast<std::size_t>(b)].x -
                        r.user_positions[static_cast<std::size_t>(u)].x;
      const double dy = r.bs_positions[static_cast<std::size_t>(b)].y -
                        r.user_positions[static_cast<std::size_t>(u)].y;
      const double sf_db = s.shadow_sigma_db * shadow(rng);
      r.lambda_sq(b, u) =
          pathloss_gain(std::hypot(dx, dy), s.pathloss_exponent) * std::pow(10.0, sf_db / 10.0);
    }

  r.h.resize(static_cast<std::size_t>(s.num_bs * s.num_users));
  for (int b = 0; b < s.num_bs; ++b)
    for (int u = 0; u < s.num_users; ++u) {
      Eigen::RowVectorXcd row(s.n_t);
      const double amp = std::sqrt(r.lambda_sq(b, u));
      for (int k = 0; k < s.n_t; ++k) row[k] = amp * complex_normal(rng);
      r.h[static_cast<std::size_t>(r.link(b, u))] = row;
    }
  return r;
}

ChannelRealization redraw_fading(const ChannelRealization& base, std::uint64_t seed) {
  ChannelRealization r = base;
  Rng rng(seed);
  for (int b = 0; b < r.num_bs; ++b)
    for (int u = 0; u < r.num_users; ++u) {
      auto& row = r.h[static_cast<std::size_t>(r.link(b, u))];
      const double amp = std::sqrt(r.lambda_sq(b, u));
      for (int k = 0; k < r.n_t; ++k) row[k] = amp * complex_normal(rng);
    }
  return r;
}

RescaledRealization rescale_for_conditioning(const ChannelRealization& realization,
                                             double noise) {
  if (realization.lambda_sq.size() == 0)
    throw std::invalid_argument("rescale_for_conditioning: no links");
  RescaledRealization out;
  out.factor = std::sqrt(realization.lambda_sq.minCoeff());
  out.realization = realization;
  for (auto& row : out.realization.h) row /= out.factor;
  out.realization.lambda_sq /= out.factor * out.factor;
  out.noise_power = noise / (out.factor * out.factor);
  return out;
}

}  // namespace jtprec
