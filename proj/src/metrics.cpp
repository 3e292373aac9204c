#include "jtprec/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace jtprec {
namespace {

struct UserTerms {
  std::complex<double> signal;
  double interference = 0.0;
};

UserTerms user_terms(const MaskedCsi& csi, const Precoder& precoder, int user, SinrMode mode) {
  if (user < 0 || user >= csi.num_users) throw std::out_of_range("user index");
  const LinkLayout layout(csi.coop, csi.n_t);
  const Eigen::VectorXcd v = layout.flatten(precoder);
  const auto rows = build_user_rows(csi, layout, mode);
  const UserRows& r = rows[static_cast<std::size_t>(user)];
  return {r.signal.evaluate(v), r.interference_power(v)};
}

}  // namespace

std::vector<double> true_sinr(const ChannelRealization& real, const Precoder& p, double noise) {
  if (p.num_bs != real.num_bs || p.num_users != real.num_users || p.n_t != real.n_t)
    throw std::invalid_argument("precoder dimensions do not match the realization");
  std::vector<double> gamma(static_cast<std::size_t>(real.num_users));
  for (int u = 0; u < real.num_users; ++u) {
    double signal = 0.0;
    double interference = 0.0;
    for (int i = 0; i < real.num_users; ++i) {
      std::complex<double> sum = 0.0;
      for (int b = 0; b < real.num_bs; ++b)
        if (p.has(b, i)) sum += (real.channel(b, u) * p.block(b, i)).value();
      if (i == u)
        signal = std::norm(sum);
      else
        interference += std::norm(sum);
    }
    gamma[static_cast<std::size_t>(u)] = signal / (interference + noise);
  }
  return gamma;
}

FlatEvaluator::FlatEvaluator(const MaskedCsi& c, const LinkLayout& layout, SinrMode mode)
    : csi(&c), rows(build_user_rows(c, layout, mode)) {}

std::vector<double> FlatEvaluator::sinr(const Eigen::VectorXcd& v) const {
  std::vector<double> gamma(rows.size());
  for (std::size_t u = 0; u < rows.size(); ++u)
    gamma[u] = std::norm(rows[u].signal.evaluate(v)) /
               (rows[u].interference_power(v) + csi->noise_power);
  return gamma;
}

double FlatEvaluator::rate(const Eigen::VectorXcd& v) const {
  return weighted_sum_rate(sinr(v), csi->weights);
}

std::vector<double> design_sinr(const MaskedCsi& csi, const Precoder& p, SinrMode mode) {
  const LinkLayout layout(csi.coop, csi.n_t);
  return FlatEvaluator(csi, layout, mode).sinr(layout.flatten(p));
}

std::vector<double> pessimistic_sinr(const MaskedCsi& csi, const Precoder& p) {
  return design_sinr(csi, p, SinrMode::kLimitedLambda);
}

std::vector<double> naive_pl_sinr(const MaskedCsi& csi, const Precoder& p) {
  return design_sinr(csi, p, SinrMode::kLimitedNaive);
}

double weighted_sum_rate(const std::vector<double>& gamma, const std::vector<double>& weights) {
  if (gamma.size() != weights.size()) throw std::invalid_argument("gamma and weights differ");
  double rate = 0.0;
  for (std::size_t u = 0; u < gamma.size(); ++u) {
    if (!(gamma[u] >= 0.0) || !(weights[u] >= 0.0))
      throw std::invalid_argument("weighted_sum_rate needs nonnegative inputs");
    if (weights[u] > 0.0) rate += weights[u] * std::log2(1.0 + gamma[u]);
  }
  return rate;
}

double receive_variance(const MaskedCsi& csi, const Precoder& p, int user, SinrMode mode) {
  const UserTerms t = user_terms(csi, p, user, mode);
  return csi.noise_power + std::norm(t.signal) + t.interference;
}

std::complex<double> mmse_receiver(const MaskedCsi& csi, const Precoder& p, int user,
                                   SinrMode mode) {
  const UserTerms t = user_terms(csi, p, user, mode);
  const double c = csi.noise_power + std::norm(t.signal) + t.interference;
  return std::conj(t.signal) / c;
}

double user_mse(const MaskedCsi& csi, const Precoder& p, std::complex<double> a, int user,
                SinrMode mode) {
  const UserTerms t = user_terms(csi, p, user, mode);
  const double c = csi.noise_power + std::norm(t.signal) + t.interference;
  return 1.0 - 2.0 * (a * t.signal).real() + std::norm(a) * c;
}

double linearizing_coefficient(double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("MSE must be positive");
  return 1.0 / xi;
}

SinrReport evaluate_report(const ChannelRealization& realization, const MaskedCsi& csi,
                           const Precoder& p, SinrMode mode) {
  SinrReport r;
  r.mode = mode;
  r.gamma_true = true_sinr(realization, p, csi.noise_power);
  r.gamma_design = design_sinr(csi, p, mode);
  r.rate_true = weighted_sum_rate(r.gamma_true, csi.weights);
  r.rate_design = weighted_sum_rate(r.gamma_design, csi.weights);
  return r;
}

}  // namespace jtprec
