#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jtprec/feedback.hpp"

namespace jtprec {

/// Sparse JT precoder: one complex N_T vector per active (b, u) link.
struct Precoder {
  int num_bs = 0;
  int n_t = 0;
  int num_users = 0;
  std::vector<Eigen::VectorXcd> w;  // b * num_users + u; empty means absent

  /// Zero blocks on exactly the links of `coop`.
  static Precoder zeros(const CooperationMap& coop, int n_t);
  /// Zero blocks on every link.
  static Precoder dense(int num_bs, int num_users, int n_t);

  [[nodiscard]] bool has(int b, int u) const {
    return w[static_cast<std::size_t>(b * num_users + u)].size() > 0;
  }
  [[nodiscard]] const Eigen::VectorXcd& block(int b, int u) const {
    return w[static_cast<std::size_t>(b * num_users + u)];
  }
  Eigen::VectorXcd& block(int b, int u) { return w[static_cast<std::size_t>(b * num_users + u)]; }

  /// Sum over served users of |w_{b,u}^(k)|^2.
  [[nodiscard]] double antenna_power(int b, int k) const;
  [[nodiscard]] double max_antenna_power() const;
  [[nodiscard]] int num_blocks() const;
  void scale(double s);

  [[nodiscard]] bool support_equals(const CooperationMap& coop) const;
  /// Every antenna within p_max * (1 + rel_tol).
  [[nodiscard]] bool satisfies_power(double p_max, double rel_tol = 1e-6) const;
};

/// Flat complex coordinates for the active links of a cooperation map.
/// Link (b, u) occupies [offset(b, u), offset(b, u) + n_t).
class LinkLayout {
 public:
  LinkLayout(const CooperationMap& coop, int n_t);

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int n_t() const { return n_t_; }
  [[nodiscard]] int offset(int b, int u) const {
    return offsets_[static_cast<std::size_t>(b * num_users_ + u)];
  }
  [[nodiscard]] bool active(int b, int u) const { return offset(b, u) >= 0; }
  [[nodiscard]] const CooperationMap& coop() const { return coop_; }

  [[nodiscard]] Eigen::VectorXcd flatten(const Precoder& p) const;
  [[nodiscard]] Precoder unflatten(const Eigen::VectorXcd& v) const;

 private:
  CooperationMap coop_;
  int n_t_ = 0;
  int num_users_ = 0;
  int size_ = 0;
  std::vector<int> offsets_;
};

}  // namespace jtprec
