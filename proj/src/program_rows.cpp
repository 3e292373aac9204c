#include "jtprec/program_rows.hpp"

#include <cmath>

namespace jtprec {

using conic::AffineExpr;

PrecoderVars PrecoderVars::create(conic::ConicProgram& program, const LinkLayout& layout) {
  const int first = program.add_variables(2 * layout.size());
  return {conic::complex_to_real_embedding(std::max(layout.size(), 1), first)};
}

// Re{c v} = Re(c) Re(v) - Im(c) Im(v),  Im{c v} = Im(c) Re(v) + Re(c) Im(v)
AffineExpr PrecoderVars::real(const ComplexForm& f, std::complex<double> scale) const {
  AffineExpr e;
  for (std::size_t j = 0; j < f.index.size(); ++j) {
    const std::complex<double> c = scale * f.coef[j];
    e.add(plan.re(f.index[j]), c.real());
    e.add(plan.im(f.index[j]), -c.imag());
  }
  return e;
}

AffineExpr PrecoderVars::imag(const ComplexForm& f, std::complex<double> scale) const {
  AffineExpr e;
  for (std::size_t j = 0; j < f.index.size(); ++j) {
    const std::complex<double> c = scale * f.coef[j];
    e.add(plan.re(f.index[j]), c.imag());
    e.add(plan.im(f.index[j]), c.real());
  }
  return e;
}

Eigen::VectorXcd PrecoderVars::extract(const std::vector<double>& x) const {
  Eigen::VectorXcd v(plan.size);
  for (int j = 0; j < plan.size; ++j)
    v[j] = {x[static_cast<std::size_t>(plan.re(j))], x[static_cast<std::size_t>(plan.im(j))]};
  return v;
}

void add_power_constraints(conic::ConicProgram& program, const LinkLayout& layout,
                           const PrecoderVars& vars, double p) {
  const CooperationMap& coop = layout.coop();
  for (int b = 0; b < coop.num_bs; ++b) {
    const auto& users = coop.served[static_cast<std::size_t>(b)];
    if (users.empty()) continue;
    for (int k = 0; k < layout.n_t(); ++k) {
      std::vector<AffineExpr> head;
      for (int u : users) {
        const int j = layout.offset(b, u) + k;
        head.push_back(AffineExpr::variable(vars.plan.re(j)));
        head.push_back(AffineExpr::variable(vars.plan.im(j)));
      }
      program.add_soc(std::move(head), AffineExpr(std::sqrt(p)));
    }
  }
}

std::vector<AffineExpr> interference_rows(const UserRows& rows, const PrecoderVars& vars,
                                          double scale) {
  std::vector<AffineExpr> out;
  for (const auto& f : rows.interference) {
    out.push_back(vars.real(f, scale));
    out.push_back(vars.imag(f, scale));
  }
  for (const auto& t : rows.lambda_terms) {
    out.push_back(AffineExpr::variable(vars.plan.re(t.index), scale * t.amplitude));
    out.push_back(AffineExpr::variable(vars.plan.im(t.index), scale * t.amplitude));
  }
  return out;
}

}  // namespace jtprec
