#pragma once

#include <cstdint>

#include "jtprec/scenario.hpp"
#include "jtprec/ssocp.hpp"

namespace jtprec {

/// Channel-inverting precoder on the full aggregated channel, scaled by one
/// scalar so the loudest antenna transmits p_max. Dense support.
/// Throws std::invalid_argument when num_users exceeds the antenna count or
/// the aggregated channel is rank deficient.
Precoder zf_precoder(const ChannelRealization& realization, double p_max);

struct PsoOptions {
  int swarm = 40;
  int iterations = 300;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  int restarts = 5;
  SinrMode mode = SinrMode::kLimitedLambda;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Global-best particle swarm over the active precoder entries. Candidates
/// are scaled to full power before evaluation, so every returned precoder
/// meets the per-antenna cap with equality on its loudest antenna.
DesignResult pso_solve(const MaskedCsi& csi, const PsoOptions& options);

}  // namespace jtprec
