#include "jtprec/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "jtprec/metrics.hpp"

namespace jtprec {

using conic::AffineExpr;

void WmmseOptions::validate() const {
  if (max_iter < 1) throw std::invalid_argument("wmmse.max_iter must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("wmmse.rel_tol must be > 0");
  if (restarts < 1) throw std::invalid_argument("wmmse.restarts must be >= 1");
}

namespace {

struct Receivers {
  std::vector<std::complex<double>> a;
  std::vector<double> d;
  std::vector<double> xi;
};

Receivers update_receivers(const MaskedCsi& csi, const std::vector<UserRows>& rows,
                           const Eigen::VectorXcd& v) {
  Receivers r;
  for (const UserRows& row : rows) {
    const std::complex<double> s = row.signal.evaluate(v);
    const double rest = csi.noise_power + row.interference_power(v);
    const double c = rest + std::norm(s);
    r.a.push_back(std::conj(s) / c);
    r.xi.push_back(rest / c);
    r.d.push_back(linearizing_coefficient(rest / c));
  }
  return r;
}

double mse_metric(const std::vector<double>& xi, const std::vector<double>& weights) {
  double m = 0.0;
  for (std::size_t u = 0; u < xi.size(); ++u)
    if (weights[u] > 0.0) m -= weights[u] * std::log2(xi[u]);
  return m;
}

// ||(2 sqrt(k) y, l - 1)|| <= l + 1 with l = t + 2 alpha d Re{a s} and
// k = alpha d |a|^2 encodes k ||y||^2 - 2 alpha d Re{a s} <= t.
std::optional<Eigen::VectorXcd> solve_flat(const MaskedCsi& csi, const LinkLayout& layout,
                                           const std::vector<UserRows>& rows,
                                           const std::vector<std::complex<double>>& a,
                                           const std::vector<double>& d) {
  conic::ConicProgram prog;
  const PrecoderVars vars = PrecoderVars::create(prog, layout);
  add_power_constraints(prog, layout, vars, csi.p_max);

  AffineExpr objective;
  for (int u = 0; u < csi.num_users; ++u) {
    const auto su = static_cast<std::size_t>(u);
    const double alpha = csi.weights[su];
    if (alpha == 0.0 || a[su] == 0.0) continue;
    const double k = alpha * d[su] * std::norm(a[su]);
    const double g = 2.0 * std::sqrt(k);
    const UserRows& r = rows[su];

    const int t = prog.add_variable();
    objective.add(t, 1.0);
    AffineExpr ell = AffineExpr::variable(t);
    ell.add(vars.real(r.signal, a[su]), 2.0 * alpha * d[su]);

    std::vector<AffineExpr> head{vars.real(r.signal, g), vars.imag(r.signal, g)};
    for (auto& e : interference_rows(r, vars, g)) head.push_back(std::move(e));
    head.push_back(AffineExpr(ell).add_constant(-1.0));
    prog.add_soc(std::move(head), AffineExpr(ell).add_constant(1.0));
  }
  prog.minimize(objective);

  const conic::ConicSolution sol = conic::solve(prog);
  if (!sol.optimal()) return std::nullopt;
  return vars.extract(sol.x);
}

}  // namespace

SubproblemResult wmmse_subproblem(const MaskedCsi& csi, const std::vector<std::complex<double>>& a,
                                  const std::vector<double>& d, SinrMode mode) {
  const auto n = static_cast<std::size_t>(csi.num_users);
  if (a.size() != n || d.size() != n) throw std::invalid_argument("receiver count mismatch");
  for (double x : d)
    if (!(x > 0.0)) throw std::invalid_argument("linearizing coefficients must be > 0");

  SubproblemResult out;
  const bool trivial = std::all_of(a.begin(), a.end(), [](auto x) { return x == 0.0; });
  if (trivial) {
    out.status = conic::SolveStatus::kOptimal;
    out.precoder = Precoder::zeros(csi.coop, csi.n_t);
    return out;
  }

  // Normalized signals are s * gain_scale / power_scale; a * s must not change.
  const NormalizedProblem np = normalize_problem(csi);
  const double receiver_scale = np.power_scale / np.gain_scale;
  std::vector<std::complex<double>> a_norm(a);
  for (auto& x : a_norm) x *= receiver_scale;

  const LinkLayout layout(np.csi.coop, np.csi.n_t);
  const auto rows = build_user_rows(np.csi, layout, mode);
  const auto v = solve_flat(np.csi, layout, rows, a_norm, d);
  if (!v) {
    out.status = conic::SolveStatus::kNumericalFailure;
    return out;
  }
  out.status = conic::SolveStatus::kOptimal;
  out.precoder = layout.unflatten(*v);
  out.precoder.scale(np.power_scale);
  return out;
}

DesignResult wmmse_solve(const MaskedCsi& csi, const WmmseOptions& options) {
  options.validate();
  const NormalizedProblem np = normalize_problem(csi);
  const LinkLayout layout(np.csi.coop, np.csi.n_t);
  const FlatEvaluator eval(np.csi, layout, options.mode);

  DesignResult result;
  Eigen::VectorXcd best_v;
  double best = -1.0;
  bool any_solved = false;
  bool all_trivial = true;

  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(options.rng_seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXcd v = layout.flatten(init_precoder(np.csi.coop, 1.0, np.csi.n_t, rng));
    Receivers rx = update_receivers(np.csi, eval.rows, v);
    double metric = mse_metric(rx.xi, np.csi.weights);

    std::vector<double> history{metric};
    std::vector<double> surrogate;
    Eigen::VectorXcd restart_v = v;
    double restart_best = metric;
    std::string status = "max_iter";
    const bool trivial = std::all_of(rx.a.begin(), rx.a.end(), [](auto x) { return x == 0.0; });
    all_trivial = all_trivial && trivial;

    for (int it = 0; !trivial && it < options.max_iter; ++it) {
      const auto next_v = solve_flat(np.csi, layout, eval.rows, rx.a, rx.d);
      ++result.trace.iterations;
      if (!next_v) {
        status = "numerical_failure";
        break;
      }
      any_solved = true;
      v = *next_v;
      rx = update_receivers(np.csi, eval.rows, v);
      const double next = mse_metric(rx.xi, np.csi.weights);
      history.push_back(next);
      surrogate.push_back(next);
      if (next > restart_best) {
        restart_best = next;
        restart_v = v;
      }
      const double gain = next - metric;
      metric = next;
      if (gain < options.rel_tol * std::max(std::abs(metric), 1e-12)) {
        status = "converged";
        break;
      }
    }
    if (trivial) status = "converged";

    result.trace.objective.push_back(std::move(history));
    result.trace.surrogate.push_back(std::move(surrogate));
    result.trace.restart_best.push_back(restart_best);
    result.trace.restart_status.push_back(status);
    if (restart_best > best) {
      best = restart_best;
      best_v = restart_v;
      result.trace.best_restart = r;
    }
  }
  if (!all_trivial && !any_solved)
    throw std::runtime_error("wmmse: the precoder subproblem failed in the conic solver");

  result.precoder = layout.unflatten(best_v);
  result.precoder.scale(np.power_scale);
  result.design_rate = eval.rate(best_v);
  return result;
}

}  // namespace jtprec
