#pragma once

#include <complex>
#include <string>
#include <vector>

#include "jtprec/feedback.hpp"
#include "jtprec/precoder.hpp"

namespace jtprec {

/// How the designer models interference from links it has no CSI for.
enum class SinrMode {
  kFull,           // every link known; needs a complete cooperation map
  kLimitedZero,    // unknown links ignored
  kLimitedLambda,  // pessimistic long-term bound
  kLimitedNaive,   // unknown h replaced by sqrt(lambda^2) * (1, ..., 1)
};

std::string to_string(SinrMode mode);
/// Accepts full, limited_zero, limited_lambda, limited_naive.
SinrMode parse_sinr_mode(const std::string& text);

/// Sparse complex linear form sum_j coef_j * v[index_j] over layout coordinates.
struct ComplexForm {
  std::vector<int> index;
  std::vector<std::complex<double>> coef;

  void add(int i, std::complex<double> c) {
    index.push_back(i);
    coef.push_back(c);
  }
  [[nodiscard]] std::complex<double> evaluate(const Eigen::VectorXcd& v) const;
};

/// amplitude * |v[index]| enters the interference as a squared norm term.
struct NormTerm {
  int index = 0;
  double amplitude = 0.0;
};

/// Everything needed to evaluate or constrain one user's SINR.
struct UserRows {
  ComplexForm signal;                      // sum_{b in B_u} h_{b,u} w_{b,u}
  std::vector<int> interferers;            // i != u with a nonzero contribution
  std::vector<ComplexForm> interference;   // coherent part per interferer
  std::vector<NormTerm> lambda_terms;      // pessimistic part, all interferers

  /// sum |interference|^2 + sum (amplitude |v|)^2, noise excluded.
  [[nodiscard]] double interference_power(const Eigen::VectorXcd& v) const;
};

std::vector<UserRows> build_user_rows(const MaskedCsi& csi, const LinkLayout& layout,
                                      SinrMode mode);

}  // namespace jtprec
