#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "jtprec/conic.hpp"
#include "jtprec/interference.hpp"
#include "jtprec/precoder.hpp"

namespace jtprec {

/// Hyperrectangle [gamma_min, gamma_max] in per-user SINR space.
struct BnbBox {
  Eigen::VectorXd gamma_min;
  Eigen::VectorXd gamma_max;
  double b_ub = 0.0;
  double b_lb = 0.0;
  bool feasible = true;
  std::optional<Precoder> best_precoder;  // attains b_lb when present

  [[nodiscard]] int longest_edge() const;
};

/// gamma_min = 0, gamma_max,u = |B_u| N_T P_max sum_{b in B_u} ||h_{b,u}||^2 / N0.
BnbBox initial_box(const MaskedCsi& csi);

struct FeasibilityResult {
  bool feasible = false;
  conic::SolveStatus status = conic::SolveStatus::kOptimal;
  std::optional<Precoder> precoder;
  std::vector<double> gamma;  // design SINR of the returned precoder
};

/// Searches a precoder on the cooperation map that reaches every SINR target
/// under the per-antenna cap. Targets of 0 add no constraint.
FeasibilityResult feasibility_check(const Eigen::VectorXd& gamma, const MaskedCsi& csi,
                                    SinrMode mode);

/// Per-coordinate tightening of the upper corner with the other coordinates
/// held at gamma_min. Assumes gamma_min is feasible.
Eigen::VectorXd bisection_tighten(const BnbBox& box, const MaskedCsi& csi, SinrMode mode,
                                  double epsilon = 0.01);

struct BoxBounds {
  double b_ub = 0.0;
  double b_lb = 0.0;
  bool feasible = false;
  std::optional<Precoder> certificate;
};

/// Upper bound from the box's gamma_max corner, lower bound from a checked
/// feasible point inside it. An infeasible box yields (0, 0).
BoxBounds box_bounds(const BnbBox& box, const MaskedCsi& csi, SinrMode mode);

struct BnbOptions {
  SinrMode mode = SinrMode::kLimitedLambda;
  double epsilon = 0.1;
  int max_iter = 100;
  double bisection_epsilon = 0.01;
  bool swapped_bounds = false;  // debug: UB from the lower corner, LB from the upper

  void validate() const;
};

struct BnbResult {
  double bb_ub = 0.0;
  double bb_lb = 0.0;
  std::optional<Precoder> precoder;
  int rounds = 0;
  long long feasibility_calls = 0;
  bool converged = false;
  std::vector<double> ub_history;  // after initialization and each round
  std::vector<double> lb_history;
};

BnbResult branch_and_bound(const MaskedCsi& csi, const BnbOptions& options);

}  // namespace jtprec
