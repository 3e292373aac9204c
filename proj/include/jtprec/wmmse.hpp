#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "jtprec/conic.hpp"
#include "jtprec/ssocp.hpp"

namespace jtprec {

struct WmmseOptions {
  int max_iter = 200;
  double rel_tol = 1e-4;
  int restarts = 1;
  SinrMode mode = SinrMode::kLimitedLambda;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct SubproblemResult {
  conic::SolveStatus status = conic::SolveStatus::kNumericalFailure;
  Precoder precoder;
};

/// Minimizes sum_u alpha_u d_u xi_u(w) for fixed receivers a_u under the
/// per-antenna cap, with the support fixed to the cooperation map.
SubproblemResult wmmse_subproblem(const MaskedCsi& csi, const std::vector<std::complex<double>>& a,
                                  const std::vector<double>& d, SinrMode mode);

/// Alternating receiver / weight / precoder updates from `restarts` random
/// starts, keeping the best. The trace objective is -sum alpha_u log2 xi_u
/// after each receiver update.
/// Throws std::runtime_error if no precoder subproblem is ever solved.
DesignResult wmmse_solve(const MaskedCsi& csi, const WmmseOptions& options);

}  // namespace jtprec
