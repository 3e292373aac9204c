#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "jtprec/config.hpp"

namespace jtprec {

inline constexpr double kBoltzmann = 1.38e-23;

struct Scenario {
  int num_bs = 3;
  int n_t = 1;
  int num_users = 3;
  double cell_radius = 500.0;      // m
  double drop_radius = 50.0;       // m
  double cell_edge_snr_db = 15.0;
  double shadow_sigma_db = 8.0;    // standard deviation of the shadow gain in dB
  double pathloss_exponent = 3.5;
  double noise_power = 0.0;        // W
  double p_max = 0.0;              // W per antenna
  std::vector<double> user_weights;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Keys and values of the default cluster (3 BSs, one antenna, 3 users).
Config default_scenario_config();

/// Reads every scenario key from `config`. noise_power_w and p_max_w are
/// optional overrides of the computed values.
Scenario build_scenario(const Config& config);

double noise_power(double temperature_k, double bandwidth_hz);

/// Power gain (d / 1 m)^(-exponent).
double pathloss_gain(double distance_m, double exponent);

/// P_max with P_max * g(cell_radius) / N0 equal to the edge SNR.
double calibrate_power(const Scenario& scenario);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct ChannelRealization {
  int num_bs = 0;
  int n_t = 0;
  int num_users = 0;
  std::vector<Point2> bs_positions;
  std::vector<Point2> user_positions;
  std::vector<Eigen::RowVectorXcd> h;  // index b * num_users + u
  Eigen::MatrixXd lambda_sq;           // num_bs x num_users
  std::uint64_t seed = 0;

  [[nodiscard]] int link(int b, int u) const { return b * num_users + u; }
  [[nodiscard]] const Eigen::RowVectorXcd& channel(int b, int u) const {
    return h[static_cast<std::size_t>(link(b, u))];
  }
};

/// One drop: BSs on the cluster circle, users uniform in the central disk,
/// lognormal shadowing and unit-variance Rayleigh fading. Pure in the seed.
ChannelRealization draw_drop(const Scenario& scenario, std::uint64_t seed);

/// Redraws only the fast fading of a realization, keeping geometry and lambda.
ChannelRealization redraw_fading(const ChannelRealization& base, std::uint64_t seed);

struct RescaledRealization {
  ChannelRealization realization;
  double noise_power = 0.0;
  double factor = 1.0;  // amplitude divisor applied to every channel
};

/// Divides every channel by the weakest link amplitude sqrt(min lambda^2)
/// and the noise by its square, which leaves every SINR unchanged.
RescaledRealization rescale_for_conditioning(const ChannelRealization& realization,
                                             double noise_power);

}  // namespace jtprec
