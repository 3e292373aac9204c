#include "jtprec/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jtprec/metrics.hpp"
#include "jtprec/ssocp.hpp"

namespace jtprec {

using conic::AffineExpr;

namespace {

constexpr double kSinrSlack = 1e-6;
constexpr int kDiagonalSteps = 12;

double box_rate(const Eigen::VectorXd& gamma, const std::vector<double>& weights) {
  return weighted_sum_rate(std::vector<double>(gamma.data(), gamma.data() + gamma.size()), weights);
}

// Feasibility oracle in normalized units; remembers the best certified point.
class Oracle {
 public:
  Oracle(const MaskedCsi& csi, SinrMode mode)
      : np_(normalize_problem(csi)), layout_(np_.csi.coop, np_.csi.n_t), eval_(np_.csi, layout_, mode) {}
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  struct Outcome {
    bool feasible = false;
    conic::SolveStatus status = conic::SolveStatus::kOptimal;
    Eigen::VectorXcd v;
    std::vector<double> gamma;
    double rate = 0.0;
  };

  Outcome check(const Eigen::VectorXd& target) {
    ++calls;
    Outcome out;
    if ((target.array() <= 0.0).all()) {
      out.v = Eigen::VectorXcd::Zero(layout_.size());
    } else {
      conic::ConicProgram prog;
      const PrecoderVars vars = PrecoderVars::create(prog, layout_);
      add_power_constraints(prog, layout_, vars, 1.0);
      const int delta = prog.add_variable();
      prog.add_lower_bound(delta, 0.0);
      for (int u = 0; u < np_.csi.num_users; ++u) {
        if (!(target[u] > 0.0)) continue;
        const UserRows& r = eval_.rows[static_cast<std::size_t>(u)];
        // Rotating each user's blocks makes the useful signal real and nonnegative.
        prog.add_equal(vars.imag(r.signal), AffineExpr(0.0));
        std::vector<AffineExpr> head{vars.real(r.signal)};
        for (auto& e : interference_rows(r, vars)) head.push_back(std::move(e));
        head.emplace_back(std::sqrt(np_.csi.noise_power));
        AffineExpr bound = vars.real(r.signal).scale(std::sqrt(1.0 + 1.0 / target[u]));
        bound.add(delta, 1.0);
        prog.add_soc(std::move(head), std::move(bound));
      }
      prog.minimize(AffineExpr::variable(delta));
      const conic::ConicSolution sol = conic::solve(prog);
      out.status = sol.status;
      if (!sol.optimal()) return out;
      out.v = vars.extract(sol.x);
      const double loudest = max_antenna_power(out.v);
      if (loudest > 1.0) out.v /= std::sqrt(loudest);
    }
    out.gamma = eval_.sinr(out.v);
    out.feasible = true;
    for (int u = 0; u < target.size(); ++u)
      if (out.gamma[static_cast<std::size_t>(u)] < target[u] * (1.0 - kSinrSlack)) out.feasible = false;
    if (out.feasible) {
      out.rate = weighted_sum_rate(out.gamma, np_.csi.weights);
      if (out.rate > best_rate) {
        best_rate = out.rate;
        best_v = out.v;
      }
    }
    return out;
  }

  [[nodiscard]] Precoder physical(const Eigen::VectorXcd& v) const {
    Precoder p = layout_.unflatten(v);
    p.scale(np_.power_scale);
    return p;
  }
  [[nodiscard]] const std::vector<double>& weights() const { return np_.csi.weights; }

  long long calls = 0;
  double best_rate = -1.0;
  Eigen::VectorXcd best_v;

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

  NormalizedProblem np_;
  LinkLayout layout_;
  FlatEvaluator eval_;
};

Eigen::VectorXd tighten(Oracle& oracle, const BnbBox& box, double epsilon) {
  Eigen::VectorXd upper = box.gamma_max;
  for (int u = 0; u < box.gamma_min.size(); ++u) {
    if (box.gamma_max[u] <= box.gamma_min[u]) continue;
    Eigen::VectorXd probe = box.gamma_min;
    probe[u] = box.gamma_max[u];
    if (oracle.check(probe).feasible) continue;
    double lo = box.gamma_min[u];
    double hi = box.gamma_max[u];
    while (hi - lo > epsilon) {
      probe[u] = 0.5 * (lo + hi);
      if (oracle.check(probe).feasible)
        lo = probe[u];
      else
        hi = probe[u];
    }
    upper[u] = hi;
  }
  return upper;
}

// Bounds for a box whose gamma_min is already known feasible via `floor`.
BoxBounds bounds_from(Oracle& oracle, const BnbBox& box, const Oracle::Outcome& floor) {
  BoxBounds out;
  out.feasible = true;
  out.b_ub = box_rate(box.gamma_max, oracle.weights());

  Oracle::Outcome cert = oracle.check(box.gamma_max);
  if (!cert.feasible) {
    // Largest feasible point on the diagonal from gamma_min to gamma_max.
    cert = floor;
    double lo = 0.0;
    double hi = 1.0;
    for (int step = 0; step < kDiagonalSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      const Oracle::Outcome probe = oracle.check(box.gamma_min + mid * (box.gamma_max - box.gamma_min));
      if (probe.feasible) {
        lo = mid;
        cert = probe;
      } else {
        hi = mid;
      }
    }
  }
  out.b_lb = std::min(cert.rate, out.b_ub);
  out.certificate = oracle.physical(cert.v);
  return out;
}

// Points of the box with gamma_u below the returned value cannot beat
// `incumbent` even with every other user at gamma_max, so the lower corner
// may be raised there. Returns false when the whole box is cut away.
bool raise_lower_corner(BnbBox& box, const std::vector<double>& weights, double incumbent) {
  const double top = box_rate(box.gamma_max, weights);
  for (int u = 0; u < box.gamma_min.size(); ++u) {
    const double alpha = weights[static_cast<std::size_t>(u)];
    if (alpha <= 0.0) continue;
    const double others = top - alpha * std::log2(1.0 + box.gamma_max[u]);
    const double needed = std::exp2((incumbent - others) / alpha) - 1.0;
    if (needed > box.gamma_max[u]) return false;
    box.gamma_min[u] = std::max(box.gamma_min[u], needed);
  }
  return true;
}

// Cuts, checks gamma_min, tightens the corner and bounds the box in place.
void evaluate_box(Oracle& oracle, BnbBox& box, const BnbOptions& options, double incumbent) {
  const bool alive =
      options.swapped_bounds || raise_lower_corner(box, oracle.weights(), incumbent);
  const Oracle::Outcome floor = alive ? oracle.check(box.gamma_min) : Oracle::Outcome{};
  if (!floor.feasible) {
    box.feasible = false;
    box.b_ub = box.b_lb = 0.0;
    box.best_precoder.reset();
    return;
  }
  box.gamma_max = tighten(oracle, box, options.bisection_epsilon);
  const BoxBounds b = bounds_from(oracle, box, floor);
  box.feasible = true;
  box.best_precoder = b.certificate;
  if (options.swapped_bounds) {
    box.b_ub = box_rate(box.gamma_min, oracle.weights());
    box.b_lb = box_rate(box.gamma_max, oracle.weights());
  } else {
    box.b_ub = b.b_ub;
    box.b_lb = b.b_lb;
  }
}

}  // namespace

int BnbBox::longest_edge() const {
  int best = 0;
  (gamma_max - gamma_min).maxCoeff(&best);
  return best;
}

BnbBox initial_box(const MaskedCsi& csi) {
  if (!(csi.noise_power > 0.0)) throw std::invalid_argument("noise power must be > 0");
  BnbBox box;
  box.gamma_min = Eigen::VectorXd::Zero(csi.num_users);
  box.gamma_max = Eigen::VectorXd::Zero(csi.num_users);
  for (int u = 0; u < csi.num_users; ++u) {
    const auto& serving = csi.coop.serving[static_cast<std::size_t>(u)];
    double gain = 0.0;
    for (int b : serving) gain += csi.channel(b, u).squaredNorm();
    box.gamma_max[u] = static_cast<double>(serving.size()) * csi.n_t * csi.p_max * gain / csi.noise_power;
  }
  return box;
}

FeasibilityResult feasibility_check(const Eigen::VectorXd& gamma, const MaskedCsi& csi,
                                    SinrMode mode) {
  if (gamma.size() != csi.num_users) throw std::invalid_argument("one SINR target per user");
  if ((gamma.array() < 0.0).any()) throw std::invalid_argument("SINR targets must be >= 0");
  Oracle oracle(csi, mode);
  const Oracle::Outcome o = oracle.check(gamma);
  FeasibilityResult r;
  r.feasible = o.feasible;
  r.status = o.status;
  r.gamma = o.gamma;
  if (o.v.size() == 0 && o.status != conic::SolveStatus::kOptimal) return r;
  r.precoder = oracle.physical(o.v);
  return r;
}

Eigen::VectorXd bisection_tighten(const BnbBox& box, const MaskedCsi& csi, SinrMode mode,
                                  double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("bisection epsilon must be > 0");
  Oracle oracle(csi, mode);
  return tighten(oracle, box, epsilon);
}

BoxBounds box_bounds(const BnbBox& box, const MaskedCsi& csi, SinrMode mode) {
  Oracle oracle(csi, mode);
  const Oracle::Outcome floor = oracle.check(box.gamma_min);
  if (!floor.feasible) return {};
  return bounds_from(oracle, box, floor);
}

void BnbOptions::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("bnb.epsilon must be > 0");
  if (max_iter < 0) throw std::invalid_argument("bnb.max_iter must be >= 0");
  if (!(bisection_epsilon > 0.0)) throw std::invalid_argument("bnb.bisection_epsilon must be > 0");
}

BnbResult branch_and_bound(const MaskedCsi& csi, const BnbOptions& options) {
  options.validate();
  Oracle oracle(csi, options.mode);
  const bool swapped = options.swapped_bounds;

  BnbBox root = initial_box(csi);
  evaluate_box(oracle, root, options, 0.0);
  std::vector<BnbBox> active;
  if (root.feasible) active.push_back(root);

  BnbResult result;
  // The swapped variant aggregates with min everywhere; kept for comparison only.
  auto aggregate = [&](double BnbBox::*field) {
    if (active.empty()) return 0.0;
    double v = active.front().*field;
    for (const auto& b : active) v = swapped ? std::min(v, b.*field) : std::max(v, b.*field);
    return v;
  };
  auto update_bounds = [&] {
    if (swapped) {
      result.bb_ub = aggregate(&BnbBox::b_ub);
      result.bb_lb = aggregate(&BnbBox::b_lb);
      return;
    }
    result.bb_lb = std::max(result.bb_lb, oracle.best_rate);
    std::erase_if(active, [&](const BnbBox& b) { return b.b_ub <= result.bb_lb; });
    const double ub = active.empty() ? result.bb_lb : aggregate(&BnbBox::b_ub);
    result.bb_ub = result.ub_history.empty() ? ub : std::min(result.bb_ub, ub);
    result.bb_ub = std::max(result.bb_ub, result.bb_lb);
  };

  update_bounds();
  result.ub_history.push_back(result.bb_ub);
  result.lb_history.push_back(result.bb_lb);

  while (result.rounds < options.max_iter && !active.empty() &&
         result.bb_ub - result.bb_lb > options.epsilon) {
    auto pick = std::max_element(active.begin(), active.end(), [&](const BnbBox& a, const BnbBox& b) {
      return swapped ? a.b_ub > b.b_ub : a.b_ub < b.b_ub;
    });
    const BnbBox parent = *pick;
    active.erase(pick);

    const int e = parent.longest_edge();
    const double mid = 0.5 * (parent.gamma_min[e] + parent.gamma_max[e]);
    BnbBox lower = parent;
    BnbBox upper = parent;
    lower.gamma_max[e] = mid;
    upper.gamma_min[e] = mid;
    for (BnbBox* child : {&lower, &upper}) {
      evaluate_box(oracle, *child, options, std::max(result.bb_lb, oracle.best_rate));
      if (child->feasible) active.push_back(std::move(*child));
    }
    ++result.rounds;
    update_bounds();
    result.ub_history.push_back(result.bb_ub);
    result.lb_history.push_back(result.bb_lb);
  }

  result.converged = result.bb_ub - result.bb_lb <= options.epsilon;
  result.feasibility_calls = oracle.calls;
  if (oracle.best_rate >= 0.0) result.precoder = oracle.physical(oracle.best_v);
  return result;
}

}  // namespace jtprec
