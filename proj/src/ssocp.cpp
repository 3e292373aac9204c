#include "jtprec/ssocp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jtprec/metrics.hpp"

namespace jtprec {

using conic::AffineExpr;

namespace {

constexpr double kMinInitialSinr = 1e-6;

}  // namespace

void SsocpOptions::validate() const {
  if (max_retries < 1) throw std::invalid_argument("ssocp.max_retries must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("ssocp.max_iter must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("ssocp.rel_tol must be > 0");
}

NormalizedProblem normalize_problem(const MaskedCsi& csi) {
  if (!(csi.p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");
  NormalizedProblem out;
  RescaledCsi r = rescale_for_conditioning(csi);
  out.csi = std::move(r.csi);
  out.gain_scale = 1.0 / r.factor;
  out.csi.noise_power /= csi.p_max;
  out.csi.p_max = 1.0;
  out.power_scale = std::sqrt(csi.p_max);
  return out;
}

Precoder init_precoder(const CooperationMap& coop, double p_max, int n_t, Rng& rng) {
  Precoder p = Precoder::zeros(coop, n_t);
  for (int u = 0; u < coop.num_users; ++u)
    for (int b : coop.serving[static_cast<std::size_t>(u)])
      for (int k = 0; k < n_t; ++k) p.block(b, u)[k] = complex_normal(rng);
  for (int b = 0; b < coop.num_bs; ++b) {
    double loudest = 0.0;
    for (int k = 0; k < n_t; ++k) loudest = std::max(loudest, p.antenna_power(b, k));
    if (loudest <= 0.0) continue;
    const double s = std::sqrt(p_max / loudest);
    for (int u : coop.served[static_cast<std::size_t>(b)]) p.block(b, u) *= s;
  }
  return p;
}

SignalLinearization linearize_signal(double p0, double q0, double beta0, double t0, double alpha) {
  if (!(beta0 > 0.0)) throw std::invalid_argument("expansion point needs beta > 0");
  if (!(t0 >= 1.0)) throw std::invalid_argument("expansion point needs t >= 1");
  if (!(alpha >= 1.0)) throw std::invalid_argument("weights in (0, 1) are not supported");
  SignalLinearization lin;
  const double mag = p0 * p0 + q0 * q0;
  lin.cp = 2.0 * p0 / beta0;
  lin.cq = 2.0 * q0 / beta0;
  lin.cb = -mag / (beta0 * beta0);
  lin.c0 = 1.0;
  if (alpha == 1.0) {
    lin.ct = 1.0;
    lin.d0 = 0.0;
  } else {
    // Tangent of the concave t^(1/alpha) is an upper bound.
    const double root = std::pow(t0, 1.0 / alpha);
    lin.ct = root / (alpha * t0);
    lin.d0 = root - lin.ct * t0;
  }
  return lin;
}

void add_interference_soc(conic::ConicProgram& program, const UserRows& rows,
                          const PrecoderVars& vars, double noise_power, int beta_var) {
  std::vector<AffineExpr> head = interference_rows(rows, vars);
  head.emplace_back(std::sqrt(noise_power));
  head.push_back(AffineExpr::variable(beta_var, 0.5).add_constant(-0.5));
  program.add_soc(std::move(head), AffineExpr::variable(beta_var, 0.5).add_constant(0.5));
}

namespace {

struct IterateOutcome {
  bool ok = false;
  Eigen::VectorXcd v;
  double surrogate = 0.0;
};

IterateOutcome solve_iterate(const MaskedCsi& csi, const LinkLayout& layout,
                             const std::vector<UserRows>& rows, const Eigen::VectorXcd& v0) {
  conic::ConicProgram prog;
  const PrecoderVars vars = PrecoderVars::create(prog, layout);
  add_power_constraints(prog, layout, vars, csi.p_max);

  std::vector<int> t_vars;
  for (int u = 0; u < csi.num_users; ++u) {
    const double alpha = csi.weights[static_cast<std::size_t>(u)];
    if (alpha == 0.0) continue;
    const UserRows& r = rows[static_cast<std::size_t>(u)];
    const std::complex<double> s0 = r.signal.evaluate(v0);
    const double beta0 = r.interference_power(v0) + csi.noise_power;
    double t0 = std::pow(1.0 + std::norm(s0) / beta0, alpha);
    if (std::norm(s0) / beta0 < kMinInitialSinr) t0 = 1.0 + kMinInitialSinr;

    const int t = prog.add_variable();
    const int beta = prog.add_variable();
    t_vars.push_back(t);
    prog.add_lower_bound(t, 1.0);
    add_interference_soc(prog, r, vars, csi.noise_power, beta);

    const SignalLinearization lin = linearize_signal(s0.real(), s0.imag(), beta0, t0, alpha);
    AffineExpr lhs(lin.c0);
    lhs.add(vars.real(r.signal), lin.cp);
    lhs.add(vars.imag(r.signal), lin.cq);
    lhs.add(beta, lin.cb);
    AffineExpr rhs(lin.d0);
    rhs.add(t, lin.ct);
    prog.add_greater_equal(lhs, rhs);
  }
  const int g = conic::geo_mean_epigraph(prog, t_vars);
  prog.maximize(AffineExpr::variable(g));

  const conic::ConicSolution sol = conic::solve(prog);
  IterateOutcome out;
  if (!sol.optimal()) return out;
  out.ok = true;
  out.v = vars.extract(sol.x);
  for (int t : t_vars) out.surrogate += std::log2(std::max(sol.value(t), 1.0));
  return out;
}

}  // namespace

DesignResult ssocp_solve(const MaskedCsi& csi, const SsocpOptions& options) {
  options.validate();
  for (double a : csi.weights)
    if (a > 0.0 && a < 1.0) throw std::invalid_argument("weights in (0, 1) are not supported");

  const NormalizedProblem np = normalize_problem(csi);
  const LinkLayout layout(np.csi.coop, np.csi.n_t);
  const FlatEvaluator eval(np.csi, layout, options.mode);
  const bool any_active =
      std::any_of(csi.weights.begin(), csi.weights.end(), [](double a) { return a > 0.0; });

  DesignResult result;
  Eigen::VectorXcd best_v;
  double best_rate = -1.0;
  bool any_solved = false;

  for (int r = 0; r < options.max_retries; ++r) {
    Rng rng(derive_seed(options.rng_seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXcd v = layout.flatten(init_precoder(np.csi.coop, 1.0, np.csi.n_t, rng));
    double rate = eval.rate(v);
    std::vector<double> history{rate};
    std::vector<double> surrogate;
    Eigen::VectorXcd restart_v = v;
    double restart_best = rate;
    std::string status = "max_iter";

    for (int it = 0; any_active && it < options.max_iter; ++it) {
      const IterateOutcome step = solve_iterate(np.csi, layout, eval.rows, v);
      ++result.trace.iterations;
      if (!step.ok) {
        status = "numerical_failure";
        break;
      }
      any_solved = true;
      const double next = eval.rate(step.v);
      history.push_back(next);
      surrogate.push_back(step.surrogate);
      v = step.v;
      if (next > restart_best) {
        restart_best = next;
        restart_v = v;
      }
      const double gain = next - rate;
      rate = next;
      if (gain <= options.rel_tol * std::max(std::abs(rate), 1e-12)) {
        status = "converged";
        break;
      }
    }
    if (!any_active) status = "converged";

    result.trace.objective.push_back(std::move(history));
    result.trace.surrogate.push_back(std::move(surrogate));
    result.trace.restart_best.push_back(restart_best);
    result.trace.restart_status.push_back(status);
    if (restart_best > best_rate) {
      best_rate = restart_best;
      best_v = restart_v;
      result.trace.best_restart = r;
    }
  }
  if (any_active && !any_solved)
    throw std::runtime_error("ssocp: every restart failed in the conic solver");

  result.precoder = layout.unflatten(best_v);
  result.precoder.scale(np.power_scale);
  result.design_rate = best_rate;
  return result;
}

}  // namespace jtprec
