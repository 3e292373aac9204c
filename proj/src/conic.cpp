#include "jtprec/conic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "conic_internal.hpp"

namespace jtprec::conic {

AffineExpr& AffineExpr::add(const AffineExpr& other, double scale) {
  for (const auto& t : other.terms_) add(t.var, scale * t.coef);
  constant_ += scale * other.constant_;
  return *this;
}

AffineExpr& AffineExpr::scale(double s) {
  for (auto& t : terms_) t.coef *= s;
  constant_ *= s;
  return *this;
}

double AffineExpr::evaluate(std::span<const double> x) const {
  double v = constant_;
  for (const auto& t : terms_) v += t.coef * x[static_cast<std::size_t>(t.var)];
  return v;
}

AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a.add(b, 1.0); }
AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a.add(b, -1.0); }
AffineExpr operator*(double s, AffineExpr a) { return a.scale(s); }

int ConicProgram::add_variable() { return num_vars_++; }

int ConicProgram::add_variables(int count) {
  if (count < 0) throw std::invalid_argument("negative variable count");
  const int first = num_vars_;
  num_vars_ += count;
  return first;
}

void ConicProgram::maximize(AffineExpr objective) {
  objective_ = std::move(objective);
  maximize_ = true;
}

void ConicProgram::minimize(AffineExpr objective) {
  objective_ = std::move(objective);
  maximize_ = false;
}

void ConicProgram::add_less_equal(AffineExpr lhs, const AffineExpr& rhs) {
  lhs.add(rhs, -1.0);
  linear_.push_back({std::move(lhs), Relation::kLessEqual});
}

void ConicProgram::add_greater_equal(const AffineExpr& lhs, AffineExpr rhs) {
  add_less_equal(std::move(rhs), lhs);
}

void ConicProgram::add_equal(AffineExpr lhs, const AffineExpr& rhs) {
  lhs.add(rhs, -1.0);
  linear_.push_back({std::move(lhs), Relation::kEqual});
}

void ConicProgram::add_lower_bound(int var, double value) {
  add_greater_equal(AffineExpr::variable(var), AffineExpr(value));
}

void ConicProgram::add_upper_bound(int var, double value) {
  add_less_equal(AffineExpr::variable(var), AffineExpr(value));
}

void ConicProgram::add_soc(std::vector<AffineExpr> head, AffineExpr bound) {
  soc_.push_back({std::move(head), std::move(bound)});
}

void ConicProgram::validate() const {
  auto check = [&](const AffineExpr& e) {
    for (const auto& t : e.terms()) {
      if (t.var < 0 || t.var >= num_vars_)
        throw std::invalid_argument("variable index " + std::to_string(t.var) +
                                    " out of range");
      if (!std::isfinite(t.coef)) throw std::invalid_argument("non-finite coefficient");
    }
    if (!std::isfinite(e.constant())) throw std::invalid_argument("non-finite constant");
  };
  check(objective_);
  for (const auto& c : linear_) check(c.expr);
  for (const auto& c : soc_) {
    if (c.head.empty()) throw std::invalid_argument("second-order cone with empty head");
    check(c.bound);
    for (const auto& e : c.head) check(e);
  }
}

double ConicProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (const auto& c : linear_) {
    const double v = c.expr.evaluate(x);
    worst = std::max(worst, c.relation == Relation::kEqual ? std::abs(v) : v);
  }
  for (const auto& c : soc_) {
    double sq = 0.0;
    for (const auto& e : c.head) {
      const double v = e.evaluate(x);
      sq += v * v;
    }
    worst = std::max(worst, std::sqrt(sq) - c.bound.evaluate(x));
  }
  return worst;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

ComplexIndexPlan complex_to_real_embedding(int n_complex, int offset) {
  if (n_complex < 1) throw std::invalid_argument("complex embedding needs n >= 1");
  return {offset, n_complex};
}

int geo_mean_epigraph(ConicProgram& program, std::span<const int> vars) {
  if (vars.empty()) throw std::invalid_argument("geometric mean of an empty list");
  const int t = program.add_variable();
  program.add_lower_bound(t, 0.0);
  if (vars.size() == 1) {
    program.add_less_equal(AffineExpr::variable(t), AffineExpr::variable(vars[0]));
    return t;
  }
  std::size_t width = 1;
  while (width < vars.size()) width *= 2;
  std::vector<int> level(vars.begin(), vars.end());
  level.resize(width, t);

  while (level.size() > 1) {
    std::vector<int> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      const int x = level[i];
      const int y = level[i + 1];
      const int z = program.add_variable();
      // z^2 <= x*y  <=>  ||(2z, x - y)|| <= x + y
      program.add_soc({AffineExpr::variable(z, 2.0),
                       AffineExpr::variable(x).add(y, -1.0)},
                      AffineExpr::variable(x).add(y, 1.0));
      next.push_back(z);
    }
    level = std::move(next);
  }
  program.add_less_equal(AffineExpr::variable(t), AffineExpr::variable(level.front()));
  return t;
}

void dump_triplets(const ConicProgram& program, std::ostream& out) {
  const detail::StandardForm sf = detail::to_standard_form(program);
  out << "# n " << sf.n << " p " << sf.A.rows() << " m " << sf.G.rows() << " l "
      << sf.num_linear << '\n';
  for (int j = 0; j < sf.n; ++j)
    if (sf.c[j] != 0.0) out << "c " << j << ' ' << sf.c[j] << '\n';
  for (int k = 0; k < sf.A.outerSize(); ++k)
    for (detail::SparseMat::InnerIterator it(sf.A, k); it; ++it)
      out << "A " << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  for (int i = 0; i < sf.b.size(); ++i)
    if (sf.b[i] != 0.0) out << "b " << i << ' ' << sf.b[i] << '\n';
  for (int k = 0; k < sf.G.outerSize(); ++k)
    for (detail::SparseMat::InnerIterator it(sf.G, k); it; ++it)
      out << "G " << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  for (int i = 0; i < sf.h.size(); ++i)
    if (sf.h[i] != 0.0) out << "h " << i << ' ' << sf.h[i] << '\n';
  for (int d : sf.soc_dims) out << "q " << d << '\n';
}

namespace detail {

StandardForm to_standard_form(const ConicProgram& program) {
  program.validate();
  StandardForm sf;
  sf.n = program.num_vars();
  const double sign = program.is_maximization() ? -1.0 : 1.0;
  sf.c = Eigen::VectorXd::Zero(sf.n);
  for (const auto& t : program.objective().terms()) sf.c[t.var] += sign * t.coef;
  sf.objective_sign = sign;
  sf.objective_offset = program.objective().constant();

  std::vector<Eigen::Triplet<double>> a_trip;
  std::vector<Eigen::Triplet<double>> g_trip;
  std::vector<double> b_vals;
  std::vector<double> h_vals;

  for (const auto& c : program.linear_constraints()) {
    if (c.relation != Relation::kEqual) continue;
    const int row = static_cast<int>(b_vals.size());
    for (const auto& t : c.expr.terms()) a_trip.emplace_back(row, t.var, t.coef);
    b_vals.push_back(-c.expr.constant());
  }
  // s = h - G x, so an expression e enters as G = -coef, h = constant.
  auto push_cone_row = [&](const AffineExpr& e) {
    const int row = static_cast<int>(h_vals.size());
    for (const auto& t : e.terms()) g_trip.emplace_back(row, t.var, -t.coef);
    h_vals.push_back(e.constant());
  };
  for (const auto& c : program.linear_constraints()) {
    if (c.relation != Relation::kLessEqual) continue;
    push_cone_row(-1.0 * c.expr);
  }
  sf.num_linear = static_cast<int>(h_vals.size());
  for (const auto& c : program.soc_constraints()) {
    push_cone_row(c.bound);
    for (const auto& e : c.head) push_cone_row(e);
    sf.soc_dims.push_back(static_cast<int>(c.head.size()) + 1);
  }

  sf.A.resize(static_cast<int>(b_vals.size()), sf.n);
  sf.A.setFromTriplets(a_trip.begin(), a_trip.end());
  sf.G.resize(static_cast<int>(h_vals.size()), sf.n);
  sf.G.setFromTriplets(g_trip.begin(), g_trip.end());
  sf.b = Eigen::Map<const Eigen::VectorXd>(b_vals.data(), static_cast<int>(b_vals.size()));
  sf.h = Eigen::Map<const Eigen::VectorXd>(h_vals.data(), static_cast<int>(h_vals.size()));
  return sf;
}

}  // namespace detail
}  // namespace jtprec::conic
