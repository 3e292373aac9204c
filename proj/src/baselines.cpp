#include "jtprec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "jtprec/metrics.hpp"

namespace jtprec {

Precoder zf_precoder(const ChannelRealization& real, double p_max) {
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");
  const int antennas = real.num_bs * real.n_t;
  if (real.num_users > antennas)
    throw std::invalid_argument("zero forcing needs num_users <= total antennas");

  Eigen::MatrixXcd h(real.num_users, antennas);
  for (int u = 0; u < real.num_users; ++u)
    for (int b = 0; b < real.num_bs; ++b) h.block(u, b * real.n_t, 1, real.n_t) = real.channel(b, u);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv.minCoeff() <= 1e-12 * sv.maxCoeff())
    throw std::invalid_argument("aggregated channel is rank deficient");

  const Eigen::MatrixXcd gram = h * h.adjoint();
  const Eigen::MatrixXcd w = h.adjoint() * gram.partialPivLu().inverse();

  Precoder p = Precoder::dense(real.num_bs, real.num_users, real.n_t);
  for (int u = 0; u < real.num_users; ++u)
    for (int b = 0; b < real.num_bs; ++b) p.block(b, u) = w.block(b * real.n_t, u, real.n_t, 1);
  p.scale(std::sqrt(p_max / p.max_antenna_power()));
  return p;
}

void PsoOptions::validate() const {
  if (swarm < 1) throw std::invalid_argument("pso.swarm must be >= 1");
  if (iterations < 1) throw std::invalid_argument("pso.iterations must be >= 1");
  if (restarts < 1) throw std::invalid_argument("pso.restarts must be >= 1");
  if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0))
    throw std::invalid_argument("pso coefficients must be >= 0");
}

namespace {

// Positions live in [-1, 1]^dim with dim = 2 * layout size (re, im pairs).
constexpr double kBox = 1.0;
constexpr double kMaxVelocity = kBox;  // half the box width

class Fitness {
 public:
  Fitness(const MaskedCsi& csi, const LinkLayout& layout, SinrMode mode)
      : layout_(layout), eval_(csi, layout, mode) {}

  // Scales x in place to unit power on the loudest antenna, returns the rate.
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXcd& v) const {
    v.resize(layout_.size());
    for (int j = 0; j < layout_.size(); ++j) v[j] = {x[2 * j], x[2 * j + 1]};
    const double loudest = max_antenna_power(v);
    if (!(loudest > 0.0)) return 0.0;
    v /= std::sqrt(loudest);
    return eval_.rate(v);
  }

 private:
  double max_antenna_power(const Eigen::VectorXcd& v) const {
    const CooperationMap& coop = layout_.coop();
    double loudest = 0.0;
    for (int b = 0; b < coop.num_bs; ++b)
      for (int k = 0; k < layout_.n_t(); ++k) {
        double p = 0.0;
        for (int u : coop.served[static_cast<std::size_t>(b)])
          p += std::norm(v[layout_.offset(b, u) + k]);
        loudest = std::max(loudest, p);
      }
    return loudest;
  }

  const LinkLayout& layout_;
  FlatEvaluator eval_;
};

}  // namespace

DesignResult pso_solve(const MaskedCsi& csi, const PsoOptions& options) {
  options.validate();
  const NormalizedProblem np = normalize_problem(csi);
  const LinkLayout layout(np.csi.coop, np.csi.n_t);
  const Fitness fitness(np.csi, layout, options.mode);
  const int dim = 2 * layout.size();

  DesignResult result;
  Eigen::VectorXcd best_v = Eigen::VectorXcd::Zero(layout.size());
  double best = -1.0;
  Eigen::VectorXcd scratch;

  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(options.rng_seed, static_cast<std::uint64_t>(r)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> vel(-kMaxVelocity, kMaxVelocity);

    const auto n = static_cast<std::size_t>(options.swarm);
    std::vector<Eigen::VectorXd> pos(n), velocity(n), pbest(n);
    std::vector<double> pbest_fit(n);
    Eigen::VectorXd gbest;
    double gbest_fit = -1.0;
    Eigen::VectorXcd gbest_v;

    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXcd v0 = layout.flatten(init_precoder(np.csi.coop, 1.0, np.csi.n_t, rng));
      pos[i].resize(dim);
      for (int j = 0; j < layout.size(); ++j) {
        pos[i][2 * j] = std::clamp(v0[j].real(), -kBox, kBox);
        pos[i][2 * j + 1] = std::clamp(v0[j].imag(), -kBox, kBox);
      }
      velocity[i] = Eigen::VectorXd::NullaryExpr(dim, [&] { return vel(rng); });
      pbest[i] = pos[i];
      pbest_fit[i] = fitness(pos[i], scratch);
      if (pbest_fit[i] > gbest_fit) {
        gbest_fit = pbest_fit[i];
        gbest = pos[i];
        gbest_v = scratch;
      }
    }

    std::vector<double> history{gbest_fit};
    for (int it = 0; it < options.iterations; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j) {
          const double vj = options.inertia * velocity[i][j] +
                            options.cognitive * unit(rng) * (pbest[i][j] - pos[i][j]) +
                            options.social * unit(rng) * (gbest[j] - pos[i][j]);
          velocity[i][j] = std::clamp(vj, -kMaxVelocity, kMaxVelocity);
          pos[i][j] = std::clamp(pos[i][j] + velocity[i][j], -kBox, kBox);
        }
      }
      // Personal and global bests update after the whole generation moved.
      for (std::size_t i = 0; i < n; ++i) {
        const double f = fitness(pos[i], scratch);
        if (f > pbest_fit[i]) {
          pbest_fit[i] = f;
          pbest[i] = pos[i];
        }
        if (f > gbest_fit) {
          gbest_fit = f;
          gbest = pos[i];
          gbest_v = scratch;
        }
      }
      history.push_back(gbest_fit);
    }
    result.trace.iterations += options.iterations;

    result.trace.objective.push_back(std::move(history));
    result.trace.surrogate.emplace_back();
    result.trace.restart_best.push_back(gbest_fit);
    result.trace.restart_status.emplace_back("max_iter");
    if (gbest_fit > best) {
      best = gbest_fit;
      best_v = gbest_v;
      result.trace.best_restart = r;
    }
  }

  result.precoder = layout.unflatten(best_v);
  result.precoder.scale(np.power_scale);
  result.design_rate = best;
  return result;
}

}  // namespace jtprec
