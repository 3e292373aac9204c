#include "jtprec/precoder.hpp"

#include <algorithm>
#include <stdexcept>

namespace jtprec {

Precoder Precoder::zeros(const CooperationMap& coop, int n_t) {
  Precoder p;
  p.num_bs = coop.num_bs;
  p.n_t = n_t;
  p.num_users = coop.num_users;
  p.w.resize(static_cast<std::size_t>(coop.num_bs * coop.num_users));
  for (int b = 0; b < coop.num_bs; ++b)
    for (int u = 0; u < coop.num_users; ++u)
      if (coop.contains(b, u)) p.block(b, u) = Eigen::VectorXcd::Zero(n_t);
  return p;
}

Precoder Precoder::dense(int num_bs, int num_users, int n_t) {
  return zeros(CooperationMap::full(num_bs, num_users), n_t);
}

double Precoder::antenna_power(int b, int k) const {
  double sum = 0.0;
  for (int u = 0; u < num_users; ++u)
    if (has(b, u)) sum += std::norm(block(b, u)[k]);
  return sum;
}

double Precoder::max_antenna_power() const {
  double best = 0.0;
  for (int b = 0; b < num_bs; ++b)
    for (int k = 0; k < n_t; ++k) best = std::max(best, antenna_power(b, k));
  return best;
}

int Precoder::num_blocks() const {
  return static_cast<int>(
      std::count_if(w.begin(), w.end(), [](const Eigen::VectorXcd& x) { return x.size() > 0; }));
}

void Precoder::scale(double s) {
  for (auto& x : w)
    if (x.size() > 0) x *= s;
}

bool Precoder::support_equals(const CooperationMap& coop) const {
  if (coop.num_bs != num_bs || coop.num_users != num_users) return false;
  for (int b = 0; b < num_bs; ++b)
    for (int u = 0; u < num_users; ++u)
      if (coop.contains(b, u) != has(b, u)) return false;
  return true;
}

bool Precoder::satisfies_power(double p_max, double rel_tol) const {
  return max_antenna_power() <= p_max * (1.0 + rel_tol);
}

LinkLayout::LinkLayout(const CooperationMap& coop, int n_t)
    : coop_(coop), n_t_(n_t), num_users_(coop.num_users) {
  offsets_.assign(static_cast<std::size_t>(coop.num_bs * coop.num_users), -1);
  for (int u = 0; u < coop.num_users; ++u)
    for (int b : coop.serving[static_cast<std::size_t>(u)]) {
      offsets_[static_cast<std::size_t>(b * num_users_ + u)] = size_;
      size_ += n_t;
    }
}

Eigen::VectorXcd LinkLayout::flatten(const Precoder& p) const {
  if (p.num_bs != coop_.num_bs || p.num_users != num_users_ || p.n_t != n_t_)
    throw std::invalid_argument("precoder dimensions do not match the layout");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size_);
  for (int b = 0; b < coop_.num_bs; ++b)
    for (int u = 0; u < num_users_; ++u) {
      if (!p.has(b, u)) continue;
      if (!active(b, u)) throw std::invalid_argument("precoder block outside the cooperation map");
      v.segment(offset(b, u), n_t_) = p.block(b, u);
    }
  return v;
}

Precoder LinkLayout::unflatten(const Eigen::VectorXcd& v) const {
  Precoder p = Precoder::zeros(coop_, n_t_);
  for (int b = 0; b < coop_.num_bs; ++b)
    for (int u = 0; u < num_users_; ++u)
      if (active(b, u)) p.block(b, u) = v.segment(offset(b, u), n_t_);
  return p;
}

}  // namespace jtprec
