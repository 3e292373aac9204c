#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace jtprec::conic {

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

/// Sparse affine form  sum_k coef_k * x[var_k] + constant.
class AffineExpr {
 public:
  AffineExpr() = default;
  explicit AffineExpr(double constant) : constant_(constant) {}

  static AffineExpr variable(int var, double coef = 1.0) {
    AffineExpr e;
    e.add(var, coef);
    return e;
  }

  AffineExpr& add(int var, double coef) {
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
  }
  AffineExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }
  AffineExpr& add(const AffineExpr& other, double scale = 1.0);
  AffineExpr& scale(double s);

  [[nodiscard]] const std::vector<LinearTerm>& terms() const { return terms_; }
  [[nodiscard]] double constant() const { return constant_; }
  [[nodiscard]] double evaluate(std::span<const double> x) const;

 private:
  std::vector<LinearTerm> terms_;
  double constant_ = 0.0;
};

AffineExpr operator+(AffineExpr a, const AffineExpr& b);
AffineExpr operator-(AffineExpr a, const AffineExpr& b);
AffineExpr operator*(double s, AffineExpr a);

enum class Relation { kLessEqual, kEqual };

struct LinearConstraint {
  AffineExpr expr;  // expr <= 0 or expr == 0
  Relation relation = Relation::kLessEqual;
};

/// ||head||_2 <= bound
struct SocConstraint {
  std::vector<AffineExpr> head;
  AffineExpr bound;
};

/// Real-variable second-order cone program with a linear objective.
class ConicProgram {
 public:
  int add_variable();
  int add_variables(int count);  // returns index of the first one
  [[nodiscard]] int num_vars() const { return num_vars_; }

  void maximize(AffineExpr objective);
  void minimize(AffineExpr objective);

  void add_less_equal(AffineExpr lhs, const AffineExpr& rhs);
  void add_greater_equal(const AffineExpr& lhs, AffineExpr rhs);
  void add_equal(AffineExpr lhs, const AffineExpr& rhs);
  void add_lower_bound(int var, double value);
  void add_upper_bound(int var, double value);
  void add_soc(std::vector<AffineExpr> head, AffineExpr bound);

  [[nodiscard]] const AffineExpr& objective() const { return objective_; }
  [[nodiscard]] bool is_maximization() const { return maximize_; }
  [[nodiscard]] const std::vector<LinearConstraint>& linear_constraints() const {
    return linear_;
  }
  [[nodiscard]] const std::vector<SocConstraint>& soc_constraints() const { return soc_; }

  /// Throws std::invalid_argument when an index is out of range or a cone
  /// head is empty.
  void validate() const;

  /// Largest absolute violation of any constraint at x (0 when satisfied).
  [[nodiscard]] double max_violation(std::span<const double> x) const;

 private:
  int num_vars_ = 0;
  AffineExpr objective_;
  bool maximize_ = true;
  std::vector<LinearConstraint> linear_;
  std::vector<SocConstraint> soc_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string to_string(SolveStatus status);

struct SolverOptions {
  double feasibility_tol = 1e-8;   // scaled residuals inside the IPM
  double gap_abs_tol = 1e-8;
  double gap_rel_tol = 1e-8;
  double certify_tol = 1e-7;       // absolute residual required for kOptimal
  int max_iterations = 100;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  double max_violation = 0.0;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
  [[nodiscard]] double value(int var) const { return x.at(static_cast<std::size_t>(var)); }
};

/// Solves with the embedded homogeneous self-dual interior-point method.
/// Never throws on numerical trouble; reports kNumericalFailure instead.
ConicSolution solve(const ConicProgram& program, const SolverOptions& options = {});

/// Contiguous block of complex coordinates stored as interleaved (re, im).
struct ComplexIndexPlan {
  int offset = 0;
  int size = 0;
  [[nodiscard]] int re(int k) const { return offset + 2 * k; }
  [[nodiscard]] int im(int k) const { return offset + 2 * k + 1; }
};

ComplexIndexPlan complex_to_real_embedding(int n_complex, int offset = 0);

/// Adds t with t <= (prod x_i)^(1/n) through a tower of hyperbolic
/// constraints z^2 <= x*y, padded to a power of two with copies of t.
/// Returns the index of t.
int geo_mean_epigraph(ConicProgram& program, std::span<const int> vars);

/// Plain-text triplet dump (one nonzero per line) for cross-checking the
/// program against an external solver.
void dump_triplets(const ConicProgram& program, std::ostream& out);

}  // namespace jtprec::conic
