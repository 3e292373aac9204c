#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jtprec/scenario.hpp"

namespace jtprec {

struct CooperationMap {
  int num_bs = 0;
  int num_users = 0;
  double threshold_db = 0.0;
  std::vector<std::vector<int>> serving;  // B_u, ascending
  std::vector<std::vector<int>> served;   // U_b, ascending

  [[nodiscard]] bool contains(int b, int u) const {
    return member_[static_cast<std::size_t>(b * num_users + u)] != 0;
  }
  [[nodiscard]] bool complete() const;
  [[nodiscard]] int num_links() const;

  /// Builds a map from per-user serving sets; fills `served`.
  static CooperationMap from_serving(int num_bs, std::vector<std::vector<int>> serving,
                                     double threshold_db);
  static CooperationMap full(int num_bs, int num_users);

 private:
  std::vector<char> member_;
};

/// CSI available at the coordination node after thresholded feedback.
struct MaskedCsi {
  int num_bs = 0;
  int n_t = 0;
  int num_users = 0;
  std::vector<Eigen::RowVectorXcd> known;  // b * num_users + u; empty unless b in B_u
  Eigen::MatrixXd lambda_sq;               // all links
  CooperationMap coop;
  double noise_power = 0.0;
  double p_max = 0.0;
  std::vector<double> weights;

  [[nodiscard]] bool is_known(int b, int u) const { return coop.contains(b, u); }
  [[nodiscard]] const Eigen::RowVectorXcd& channel(int b, int u) const;
};

/// Each user keeps the BSs within T dB of its strongest long-term link.
/// T must be >= 0 or +infinity.
CooperationMap relative_threshold(const ChannelRealization& realization, double threshold_db);

MaskedCsi mask_csi(const ChannelRealization& realization, const CooperationMap& coop,
                   double noise_power, double p_max, std::vector<double> weights);

MaskedCsi mask_csi(const ChannelRealization& realization, const CooperationMap& coop,
                   const Scenario& scenario);

struct BackhaulLoad {
  long long csi_coefficients = 0;
  long long precoder_weights = 0;
};

BackhaulLoad backhaul_load(const CooperationMap& coop, int n_t);

struct RescaledCsi {
  MaskedCsi csi;
  double factor = 1.0;
};

/// Same scaling as the realization overload: channels / a, lambda^2 / a^2,
/// N0 / a^2, with a the weakest nonzero link amplitude (1 if none).
RescaledCsi rescale_for_conditioning(const MaskedCsi& csi);

}  // namespace jtprec
