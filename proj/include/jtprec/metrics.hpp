#pragma once

#include <complex>
#include <vector>

#include "jtprec/interference.hpp"
#include "jtprec/precoder.hpp"
#include "jtprec/scenario.hpp"

namespace jtprec {

/// SINR on the full channels; absent precoder blocks count as zeros.
std::vector<double> true_sinr(const ChannelRealization& realization, const Precoder& precoder,
                              double noise_power);

/// SINR under the designer's interference model. Throws std::invalid_argument
/// when the precoder has a block outside the cooperation map.
std::vector<double> design_sinr(const MaskedCsi& csi, const Precoder& precoder, SinrMode mode);

std::vector<double> pessimistic_sinr(const MaskedCsi& csi, const Precoder& precoder);
std::vector<double> naive_pl_sinr(const MaskedCsi& csi, const Precoder& precoder);

double weighted_sum_rate(const std::vector<double>& gamma, const std::vector<double>& weights);

/// N0 + |signal|^2 + interference under `mode` (pessimistic by default).
double receive_variance(const MaskedCsi& csi, const Precoder& precoder, int user,
                        SinrMode mode = SinrMode::kLimitedLambda);

/// conj(signal) / c_u.
std::complex<double> mmse_receiver(const MaskedCsi& csi, const Precoder& precoder, int user,
                                   SinrMode mode = SinrMode::kLimitedLambda);

/// 1 - 2 Re{a s} + |a|^2 c_u.
double user_mse(const MaskedCsi& csi, const Precoder& precoder, std::complex<double> a, int user,
                SinrMode mode = SinrMode::kLimitedLambda);

/// 1 / xi; throws std::invalid_argument for xi <= 0.
double linearizing_coefficient(double xi);

struct SinrReport {
  SinrMode mode = SinrMode::kLimitedLambda;
  std::vector<double> gamma_true;
  std::vector<double> gamma_design;
  double rate_true = 0.0;
  double rate_design = 0.0;
};

SinrReport evaluate_report(const ChannelRealization& realization, const MaskedCsi& csi,
                           const Precoder& precoder, SinrMode mode);

/// Per-user signal, interference and SINR evaluated on flat layout coordinates.
struct FlatEvaluator {
  FlatEvaluator(const MaskedCsi& csi, const LinkLayout& layout, SinrMode mode);

  [[nodiscard]] std::vector<double> sinr(const Eigen::VectorXcd& v) const;
  [[nodiscard]] double rate(const Eigen::VectorXcd& v) const;

  const MaskedCsi* csi;
  std::vector<UserRows> rows;
};

}  // namespace jtprec
