#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jtprec/conic.hpp"
#include "jtprec/interference.hpp"
#include "jtprec/precoder.hpp"
#include "jtprec/program_rows.hpp"
#include "jtprec/random.hpp"

namespace jtprec {

/// Per-restart iteration history shared by the iterative designers.
struct SolveTrace {
  std::vector<std::vector<double>> objective;  // design rate per iterate, entry 0 is the start
  std::vector<std::vector<double>> surrogate;  // convex-model objective per solved iterate
  std::vector<double> restart_best;
  std::vector<std::string> restart_status;     // converged, max_iter, numerical_failure
  int best_restart = -1;
  int iterations = 0;                          // convex solves over all restarts
};

struct DesignResult {
  Precoder precoder;
  SolveTrace trace;
  double design_rate = 0.0;
};

struct SsocpOptions {
  int max_retries = 5;
  int max_iter = 30;
  double rel_tol = 1e-3;
  SinrMode mode = SinrMode::kLimitedLambda;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// CN(0,1) weights on every active link, then each BS scaled so its
/// loudest antenna transmits exactly p_max.
Precoder init_precoder(const CooperationMap& coop, double p_max, int n_t, Rng& rng);

/// First-order model of (p^2 + q^2)/beta + 1 around (p0, q0, beta0) and of
/// t^(1/alpha) around t0, written as
///   lhs(p, q, beta) = cp p + cq q + cb beta + c0  >=  rhs(t) = ct t + d0.
struct SignalLinearization {
  double cp = 0.0, cq = 0.0, cb = 0.0, c0 = 0.0;
  double ct = 1.0, d0 = 0.0;

  [[nodiscard]] double lhs(double p, double q, double beta) const {
    return cp * p + cq * q + cb * beta + c0;
  }
  [[nodiscard]] double rhs(double t) const { return ct * t + d0; }
};

/// Throws std::invalid_argument when beta0 <= 0, t0 < 1, or alpha < 1.
SignalLinearization linearize_signal(double p0, double q0, double beta0, double t0, double alpha);

/// ||(interference rows, sqrt(N0), (beta - 1)/2)|| <= (beta + 1)/2.
void add_interference_soc(conic::ConicProgram& program, const UserRows& rows,
                          const PrecoderVars& vars, double noise_power, int beta_var);

/// Successive SOCP weighted sum rate maximization with random restarts.
/// Throws std::runtime_error when every restart fails numerically.
DesignResult ssocp_solve(const MaskedCsi& csi, const SsocpOptions& options);

/// Internal units shared by the designers: channels rescaled for
/// conditioning, power normalized to one per antenna.
struct NormalizedProblem {
  MaskedCsi csi;          // p_max == 1
  double power_scale = 1; // physical w = power_scale * normalized w
  double gain_scale = 1;  // normalized h = gain_scale * physical h
};

NormalizedProblem normalize_problem(const MaskedCsi& csi);

}  // namespace jtprec
