#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "jtprec/conic.hpp"

namespace jtprec::conic::detail {

using SparseMat = Eigen::SparseMatrix<double>;

// minimize c'x  s.t.  A x = b,  G x + s = h,  s in R+^l x Q^{q_1} x ... x Q^{q_k}
struct StandardForm {
  int n = 0;
  Eigen::VectorXd c;
  SparseMat A;
  Eigen::VectorXd b;
  SparseMat G;
  Eigen::VectorXd h;
  int num_linear = 0;
  std::vector<int> soc_dims;
  double objective_sign = 1.0;
  double objective_offset = 0.0;
};

StandardForm to_standard_form(const ConicProgram& program);

struct IpmResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd x;
  int iterations = 0;
};

IpmResult solve_standard_form(const StandardForm& sf, const SolverOptions& options);

}  // namespace jtprec::conic::detail
