#pragma once

#include <complex>
#include <vector>

#include "jtprec/conic.hpp"
#include "jtprec/interference.hpp"
#include "jtprec/precoder.hpp"

namespace jtprec {

/// Real-embedded precoder variables of a conic program.
struct PrecoderVars {
  conic::ComplexIndexPlan plan;

  /// Adds 2 * layout.size() variables to `program`.
  static PrecoderVars create(conic::ConicProgram& program, const LinkLayout& layout);

  [[nodiscard]] conic::AffineExpr real(const ComplexForm& f,
                                       std::complex<double> scale = 1.0) const;
  [[nodiscard]] conic::AffineExpr imag(const ComplexForm& f,
                                       std::complex<double> scale = 1.0) const;
  [[nodiscard]] Eigen::VectorXcd extract(const std::vector<double>& x) const;
};

/// ||(w_{b,u}^(k))_{u in U_b}|| <= sqrt(p) for every BS antenna.
void add_power_constraints(conic::ConicProgram& program, const LinkLayout& layout,
                           const PrecoderVars& vars, double p);

/// Real rows whose squared norm is the user's interference power, each
/// multiplied by `scale`.
std::vector<conic::AffineExpr> interference_rows(const UserRows& rows, const PrecoderVars& vars,
                                                 double scale = 1.0);

}  // namespace jtprec
