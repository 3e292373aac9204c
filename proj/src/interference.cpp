#include "jtprec/interference.hpp"

#include <cmath>
#include <stdexcept>

namespace jtprec {

std::string to_string(SinrMode mode) {
  switch (mode) {
    case SinrMode::kFull: return "full";
    case SinrMode::kLimitedZero: return "limited_zero";
    case SinrMode::kLimitedLambda: return "limited_lambda";
    case SinrMode::kLimitedNaive: return "limited_naive";
  }
  return "unknown";
}

SinrMode parse_sinr_mode(const std::string& text) {
  if (text == "full") return SinrMode::kFull;
  if (text == "limited_zero") return SinrMode::kLimitedZero;
  if (text == "limited_lambda") return SinrMode::kLimitedLambda;
  if (text == "limited_naive") return SinrMode::kLimitedNaive;
  throw std::invalid_argument("unknown SINR mode '" + text + "'");
}

std::complex<double> ComplexForm::evaluate(const Eigen::VectorXcd& v) const {
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < index.size(); ++j) s += coef[j] * v[index[j]];
  return s;
}

double UserRows::interference_power(const Eigen::VectorXcd& v) const {
  double total = 0.0;
  for (const auto& f : interference) total += std::norm(f.evaluate(v));
  for (const auto& t : lambda_terms) total += t.amplitude * t.amplitude * std::norm(v[t.index]);
  return total;
}

std::vector<UserRows> build_user_rows(const MaskedCsi& csi, const LinkLayout& layout,
                                      SinrMode mode) {
  const CooperationMap& coop = csi.coop;
  if (layout.coop().num_bs != coop.num_bs || layout.coop().num_users != coop.num_users)
    throw std::invalid_argument("layout does not match the CSI");
  if (mode == SinrMode::kFull && !coop.complete())
    throw std::invalid_argument("mode full needs every link in the cooperation map");
  const int n_t = csi.n_t;
  std::vector<UserRows> rows(static_cast<std::size_t>(csi.num_users));

  for (int u = 0; u < csi.num_users; ++u) {
    UserRows& r = rows[static_cast<std::size_t>(u)];
    for (int b : coop.serving[static_cast<std::size_t>(u)]) {
      const auto& h = csi.channel(b, u);
      for (int k = 0; k < n_t; ++k) r.signal.add(layout.offset(b, u) + k, h[k]);
    }
    for (int i = 0; i < csi.num_users; ++i) {
      if (i == u) continue;
      ComplexForm known;
      std::vector<int> unknown;
      for (int b : coop.serving[static_cast<std::size_t>(i)]) {
        if (coop.contains(b, u)) {
          const auto& h = csi.channel(b, u);
          for (int k = 0; k < n_t; ++k) known.add(layout.offset(b, i) + k, h[k]);
        } else {
          unknown.push_back(b);
        }
      }
      if (mode == SinrMode::kLimitedNaive) {
        for (int b : unknown) {
          const double amp = std::sqrt(csi.lambda_sq(b, u));
          for (int k = 0; k < n_t; ++k) known.add(layout.offset(b, i) + k, amp);
        }
      } else if (mode == SinrMode::kLimitedLambda && !unknown.empty()) {
        const double count = static_cast<double>(unknown.size());
        for (int b : unknown) {
          const double amp = std::sqrt(count * csi.lambda_sq(b, u));
          for (int k = 0; k < n_t; ++k) r.lambda_terms.push_back({layout.offset(b, i) + k, amp});
        }
      }
      if (!known.index.empty()) {
        r.interferers.push_back(i);
        r.interference.push_back(std::move(known));
      }
    }
  }
  return rows;
}

}  // namespace jtprec
