// Homogeneous self-dual primal-dual interior-point method for
//   minimize c'x  s.t.  Ax = b,  Gx + s = h,  s in K
// with Nesterov-Todd scaling and a Mehrotra predictor-corrector step.
// K is a product of a nonnegative orthant and second-order cones.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "conic_internal.hpp"

namespace jtprec::conic::detail {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConeBlock {
  int row0 = 0;
  int dim = 0;
  std::vector<int> cols;  // support columns of G restricted to the block rows
  MatrixXd g;             // dense block  dim x cols.size()
  MatrixXd gtg;           // g' g
};

struct LinearRow {
  std::vector<int> cols;
  std::vector<double> vals;
};

struct Scaling {
  VectorXd lp_d;  // W = diag(lp_d) on the orthant
  std::vector<double> beta;
  std::vector<VectorXd> v;  // W = beta (2 v v' - J), v'Jv = 1
  VectorXd lambda;          // W z = W^{-1} s
};

double soc_det(const double* x, int d) {
  double nrm = 0.0;
  for (int i = 1; i < d; ++i) nrm += x[i] * x[i];
  nrm = std::sqrt(nrm);
  return (x[0] - nrm) * (x[0] + nrm);
}

class Cones {
 public:
  Cones(int l, const std::vector<int>& dims) : l_(l), dims_(dims) {
    int row = l;
    for (int d : dims_) {
      starts_.push_back(row);
      row += d;
    }
    m_ = row;
  }

  int m() const { return m_; }
  int l() const { return l_; }
  int num_soc() const { return static_cast<int>(dims_.size()); }
  int start(int k) const { return starts_[static_cast<std::size_t>(k)]; }
  int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
  double degree() const { return static_cast<double>(l_ + num_soc()); }

  VectorXd identity() const {
    VectorXd e = VectorXd::Zero(m_);
    e.head(l_).setOnes();
    for (int k = 0; k < num_soc(); ++k) e[start(k)] = 1.0;
    return e;
  }

  // Largest t with x + t*e in K boundary crossing, i.e. -(min eigenvalue of x).
  double min_eig(const VectorXd& x) const {
    double lo = kInf;
    for (int i = 0; i < l_; ++i) lo = std::min(lo, x[i]);
    for (int k = 0; k < num_soc(); ++k) {
      const int s = start(k);
      lo = std::min(lo, x[s] - x.segment(s + 1, dim(k) - 1).norm());
    }
    return lo;
  }

  // Max alpha with x + alpha*d in K, for x in int K.
  double max_step(const VectorXd& x, const VectorXd& d) const {
    double alpha = kInf;
    for (int i = 0; i < l_; ++i)
      if (d[i] < 0.0) alpha = std::min(alpha, -x[i] / d[i]);
    for (int k = 0; k < num_soc(); ++k) {
      const int s = start(k);
      const int n = dim(k);
      const double det_x = soc_det(x.data() + s, n);
      if (!(det_x > 0.0)) return 0.0;
      const double det_d = d[s] * d[s] - d.segment(s + 1, n - 1).squaredNorm();
      const double xjd = x[s] * d[s] - x.segment(s + 1, n - 1).dot(d.segment(s + 1, n - 1));
      const double disc = std::sqrt(std::max(0.0, xjd * xjd - det_x * det_d));
      // Smallest generalized eigenvalue of d relative to x.
      double mu_min;
      if (xjd > 0.0)
        mu_min = det_d / (xjd + disc);
      else
        mu_min = (xjd - disc) / det_x;
      if (mu_min < 0.0) alpha = std::min(alpha, -1.0 / mu_min);
    }
    return alpha;
  }

  VectorXd jordan(const VectorXd& x, const VectorXd& y) const {
    VectorXd r(m_);
    r.head(l_) = x.head(l_).cwiseProduct(y.head(l_));
    for (int k = 0; k < num_soc(); ++k) {
      const int s = start(k);
      const int n = dim(k);
      r[s] = x.segment(s, n).dot(y.segment(s, n));
      r.segment(s + 1, n - 1) = x[s] * y.segment(s + 1, n - 1) + y[s] * x.segment(s + 1, n - 1);
    }
    return r;
  }

  // Solves lambda o x = d for x.
  VectorXd jordan_solve(const VectorXd& lambda, const VectorXd& d) const {
    VectorXd x(m_);
    x.head(l_) = d.head(l_).cwiseQuotient(lambda.head(l_));
    for (int k = 0; k < num_soc(); ++k) {
      const int s = start(k);
      const int n = dim(k);
      const double l0 = lambda[s];
      const double det = soc_det(lambda.data() + s, n);
      const double x0 =
          (l0 * d[s] - lambda.segment(s + 1, n - 1).dot(d.segment(s + 1, n - 1))) / det;
      x[s] = x0;
      x.segment(s + 1, n - 1) = (d.segment(s + 1, n - 1) - x0 * lambda.segment(s + 1, n - 1)) / l0;
    }
    return x;
  }

  Scaling scaling(const VectorXd& s, const VectorXd& z) const {
    Scaling w;
    w.lp_d = (s.head(l_).cwiseQuotient(z.head(l_))).cwiseSqrt();
    w.lambda.resize(m_);
    w.lambda.head(l_) = (s.head(l_).cwiseProduct(z.head(l_))).cwiseSqrt();
    for (int k = 0; k < num_soc(); ++k) {
      const int st = start(k);
      const int n = dim(k);
      const double det_s = soc_det(s.data() + st, n);
      const double det_z = soc_det(z.data() + st, n);
      const VectorXd sb = s.segment(st, n) / std::sqrt(det_s);
      const VectorXd zb = z.segment(st, n) / std::sqrt(det_z);
      const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
      // NT point of the normalized pair, then its square root so that W^2 z = s.
      VectorXd wb = sb;
      wb[0] += zb[0];
      wb.tail(n - 1) -= zb.tail(n - 1);
      wb /= 2.0 * gamma;
      VectorXd v = wb;
      v[0] += 1.0;
      v /= std::sqrt(2.0 * (wb[0] + 1.0));
      const double beta = std::pow(det_s / det_z, 0.25);
      w.beta.push_back(beta);
      w.v.push_back(v);
    }
    w.lambda.tail(m_ - l_) = apply_w(w, z).tail(m_ - l_);
    return w;
  }

  VectorXd apply_w(const Scaling& w, const VectorXd& x) const {
    VectorXd y(m_);
    y.head(l_) = w.lp_d.cwiseProduct(x.head(l_));
    for (int k = 0; k < num_soc(); ++k) {
      const int s = start(k);
      const int n = dim(k);
      const VectorXd& v = w.v[static_cast<std::size_t>(k)];
      const auto xs = x.segment(s, n);
      VectorXd r = 2.0 * v.dot(xs) * v;
      r[0] -= xs[0];
      r.tail(n - 1) += xs.tail(n - 1);
      y.segment(s, n) = w.beta[static_cast<std::size_t>(k)] * r;
    }
    return y;
  }

  VectorXd apply_winv(const Scaling& w, const VectorXd& x) const {
    VectorXd y(m_);
    y.head(l_) = x.head(l_).cwiseQuotient(w.lp_d);
    for (int k = 0; k < num_soc(); ++k) {
      const int s = start(k);
      const int n = dim(k);
      VectorXd a = w.v[static_cast<std::size_t>(k)];
      a.tail(n - 1) = -a.tail(n - 1);
      const auto xs = x.segment(s, n);
      VectorXd r = 2.0 * a.dot(xs) * a;
      r[0] -= xs[0];
      r.tail(n - 1) += xs.tail(n - 1);
      y.segment(s, n) = r / w.beta[static_cast<std::size_t>(k)];
    }
    return y;
  }

 private:
  int l_;
  std::vector<int> dims_;
  std::vector<int> starts_;
  int m_ = 0;
};

class KktSystem {
 public:
  KktSystem(const StandardForm& sf, const Cones& cones) : sf_(sf), cones_(cones) {
    const RowSparse g_rows = sf.G;
    linear_rows_.resize(static_cast<std::size_t>(cones.l()));
    for (int i = 0; i < cones.l(); ++i) {
      for (RowSparse::InnerIterator it(g_rows, i); it; ++it) {
        linear_rows_[static_cast<std::size_t>(i)].cols.push_back(static_cast<int>(it.col()));
        linear_rows_[static_cast<std::size_t>(i)].vals.push_back(it.value());
      }
    }
    for (int k = 0; k < cones.num_soc(); ++k) {
      ConeBlock blk;
      blk.row0 = cones.start(k);
      blk.dim = cones.dim(k);
      for (int r = blk.row0; r < blk.row0 + blk.dim; ++r)
        for (RowSparse::InnerIterator it(g_rows, r); it; ++it)
          blk.cols.push_back(static_cast<int>(it.col()));
      std::sort(blk.cols.begin(), blk.cols.end());
      blk.cols.erase(std::unique(blk.cols.begin(), blk.cols.end()), blk.cols.end());
      blk.g = MatrixXd::Zero(blk.dim, static_cast<int>(blk.cols.size()));
      for (int r = 0; r < blk.dim; ++r)
        for (RowSparse::InnerIterator it(g_rows, blk.row0 + r); it; ++it) {
          const auto pos = std::lower_bound(blk.cols.begin(), blk.cols.end(), it.col());
          blk.g(r, static_cast<int>(pos - blk.cols.begin())) = it.value();
        }
      blk.gtg = blk.g.transpose() * blk.g;
      blocks_.push_back(std::move(blk));
    }
    at_ = sf.A.transpose();
    gt_ = sf.G.transpose();
  }

  // Factors [G'W^{-2}G + dI, A'; A, -dI].
  bool factor(const Scaling& w) {
    w_ = &w;
    const int n = sf_.n;
    const int p = static_cast<int>(sf_.A.rows());
    MatrixXd h = MatrixXd::Zero(n, n);
    for (int i = 0; i < cones_.l(); ++i) {
      const auto& row = linear_rows_[static_cast<std::size_t>(i)];
      const double wt = 1.0 / (w.lp_d[i] * w.lp_d[i]);
      for (std::size_t a = 0; a < row.cols.size(); ++a)
        for (std::size_t b = 0; b < row.cols.size(); ++b)
          h(row.cols[a], row.cols[b]) += wt * row.vals[a] * row.vals[b];
    }
    for (int k = 0; k < cones_.num_soc(); ++k) {
      const ConeBlock& blk = blocks_[static_cast<std::size_t>(k)];
      if (blk.cols.empty()) continue;
      const VectorXd& v = w.v[static_cast<std::size_t>(k)];
      VectorXd a = v;
      a.tail(blk.dim - 1) = -a.tail(blk.dim - 1);
      const VectorXd ga = blk.g.transpose() * a;
      const VectorXd gv = blk.g.transpose() * v;
      const double beta = w.beta[static_cast<std::size_t>(k)];
      MatrixXd local = blk.gtg + 4.0 * a.squaredNorm() * ga * ga.transpose() -
                       2.0 * (ga * gv.transpose() + gv * ga.transpose());
      local /= beta * beta;
      for (std::size_t i = 0; i < blk.cols.size(); ++i)
        for (std::size_t j = 0; j < blk.cols.size(); ++j)
          h(blk.cols[i], blk.cols[j]) += local(static_cast<int>(i), static_cast<int>(j));
    }
    MatrixXd m = MatrixXd::Zero(n + p, n + p);
    const double reg = kRegularization * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    m.topLeftCorner(n, n) = h;
    m.topLeftCorner(n, n).diagonal().array() += reg;
    if (p > 0) {
      const MatrixXd a_dense = MatrixXd(sf_.A);
      m.bottomLeftCorner(p, n) = a_dense;
      m.topRightCorner(n, p) = a_dense.transpose();
      m.bottomRightCorner(p, p).diagonal().setConstant(-reg);
    }
    lu_.compute(m);
    return m.allFinite();
  }

  // Solves [0 A' G'; A 0 0; G 0 -W^2] [dx; dy; dz] = [r1; r2; r3].
  void solve(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& dx,
             VectorXd& dy, VectorXd& dz) const {
    solve_once(r1, r2, r3, dx, dy, dz);
    auto residual = [&](VectorXd& e1, VectorXd& e2, VectorXd& e3) {
      e1 = r1 - (at_ * dy + gt_ * dz);
      e2 = r2 - sf_.A * dx;
      e3 = r3 - (sf_.G * dx - cones_.apply_w(*w_, cones_.apply_w(*w_, dz)));
      return std::sqrt(e1.squaredNorm() + e2.squaredNorm() + e3.squaredNorm());
    };
    VectorXd e1, e2, e3;
    double err = residual(e1, e2, e3);
    const double target = 1e-14 * (1.0 + std::sqrt(r1.squaredNorm() + r2.squaredNorm() +
                                                   r3.squaredNorm()));
    for (int pass = 0; pass < kRefinementPasses && err > target; ++pass) {
      VectorXd cx, cy, cz;
      solve_once(e1, e2, e3, cx, cy, cz);
      const VectorXd px = dx, py = dy, pz = dz;
      dx += cx;
      dy += cy;
      dz += cz;
      VectorXd f1, f2, f3;
      const double next = residual(f1, f2, f3);
      if (!(next < err)) {
        dx = px;
        dy = py;
        dz = pz;
        break;
      }
      err = next;
      e1 = std::move(f1);
      e2 = std::move(f2);
      e3 = std::move(f3);
    }
  }

 private:
  static constexpr double kRegularization = 1e-13;
  static constexpr int kRefinementPasses = 8;

  void solve_once(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& dx,
                  VectorXd& dy, VectorXd& dz) const {
    const int n = sf_.n;
    const int p = static_cast<int>(sf_.A.rows());
    const VectorXd w2inv_r3 = cones_.apply_winv(*w_, cones_.apply_winv(*w_, r3));
    VectorXd rhs(n + p);
    rhs.head(n) = r1 + gt_ * w2inv_r3;
    rhs.tail(p) = r2;
    const VectorXd sol = lu_.solve(rhs);
    dx = sol.head(n);
    dy = sol.tail(p);
    dz = cones_.apply_winv(*w_, cones_.apply_winv(*w_, sf_.G * dx - r3));
  }

  const StandardForm& sf_;
  const Cones& cones_;
  std::vector<LinearRow> linear_rows_;
  std::vector<ConeBlock> blocks_;
  SparseMat at_;
  SparseMat gt_;
  const Scaling* w_ = nullptr;
  Eigen::PartialPivLU<MatrixXd> lu_;
};

struct Iterate {
  VectorXd x, y, z, s;
  double tau = 1.0;
  double kappa = 1.0;
};

struct Metrics {
  double pres = kInf;
  double dres = kInf;
  double gap = kInf;
  double relgap = kInf;
  double pinf = kInf;  // primal infeasibility certificate residual
  double dinf = kInf;  // dual infeasibility certificate residual
  bool pinf_sign = false;
  bool dinf_sign = false;
};

}  // namespace

IpmResult solve_standard_form(const StandardForm& sf, const SolverOptions& options) {
  IpmResult result;
  const int n = sf.n;
  const Cones cones(sf.num_linear, sf.soc_dims);
  const int m = cones.m();
  const int p = static_cast<int>(sf.A.rows());

  if (m == 0 && p == 0) {
    // Unconstrained linear objective.
    result.x = VectorXd::Zero(n);
    result.status = sf.c.isZero(0.0) ? SolveStatus::kOptimal : SolveStatus::kUnbounded;
    return result;
  }

  KktSystem kkt(sf, cones);
  const SparseMat at = sf.A.transpose();
  const SparseMat gt = sf.G.transpose();
  const VectorXd e = cones.identity();

  // Initial point from two least-squares problems with W = I.
  Scaling unit;
  unit.lp_d = VectorXd::Ones(cones.l());
  for (int k = 0; k < cones.num_soc(); ++k) {
    unit.beta.push_back(1.0);
    VectorXd v = VectorXd::Zero(cones.dim(k));
    v[0] = 1.0;
    unit.v.push_back(v);
  }
  if (!kkt.factor(unit)) return result;

  Iterate it;
  {
    VectorXd dx, dy, dz;
    kkt.solve(VectorXd::Zero(n), sf.b, sf.h, dx, dy, dz);
    it.x = dx;
    it.s = -dz;
    const double shift = -cones.min_eig(it.s);
    if (shift >= 0.0) it.s += (1.0 + shift) * e;

    kkt.solve(-sf.c, VectorXd::Zero(p), VectorXd::Zero(m), dx, dy, dz);
    it.y = dy;
    it.z = dz;
    const double zshift = -cones.min_eig(it.z);
    if (zshift >= 0.0) it.z += (1.0 + zshift) * e;
  }

  const double bnorm = std::max(1.0, sf.b.size() ? sf.b.norm() : 0.0);
  const double hnorm = std::max(1.0, sf.h.size() ? sf.h.norm() : 0.0);
  const double cnorm = std::max(1.0, sf.c.norm());

  auto evaluate = [&](const Iterate& pt) {
    Metrics mt;
    const VectorXd ax = sf.A * pt.x;
    const VectorXd gx = sf.G * pt.x;
    const VectorXd aty_gtz = at * pt.y + gt * pt.z;
    const VectorXd ry = ax - sf.b * pt.tau;
    const VectorXd rz = pt.s + gx - sf.h * pt.tau;
    const VectorXd rx = aty_gtz + sf.c * pt.tau;
    mt.pres = std::max(p ? ry.norm() / bnorm : 0.0, m ? rz.norm() / hnorm : 0.0) / pt.tau;
    mt.dres = rx.norm() / cnorm / pt.tau;
    const double pcost = sf.c.dot(pt.x) / pt.tau;
    const double dcost = -(sf.b.dot(pt.y) + sf.h.dot(pt.z)) / pt.tau;
    mt.gap = pt.s.dot(pt.z) / (pt.tau * pt.tau);
    if (pcost < 0.0)
      mt.relgap = mt.gap / -pcost;
    else if (dcost > 0.0)
      mt.relgap = mt.gap / dcost;
    const double btz = sf.b.dot(pt.y) + sf.h.dot(pt.z);
    mt.pinf_sign = btz < 0.0;
    if (mt.pinf_sign) mt.pinf = aty_gtz.norm() / cnorm / -btz;
    const double ctx = sf.c.dot(pt.x);
    mt.dinf_sign = ctx < 0.0;
    if (mt.dinf_sign)
      mt.dinf = std::max(p ? ax.norm() / bnorm : 0.0, m ? (gx + pt.s).norm() / hnorm : 0.0) / -ctx;
    return mt;
  };

  auto converged = [&](const Metrics& mt, double scale) {
    return mt.pres < options.feasibility_tol * scale && mt.dres < options.feasibility_tol * scale &&
           (mt.gap < options.gap_abs_tol * scale || mt.relgap < options.gap_rel_tol * scale);
  };

  bool finished = false;
  int iter = 0;
  Iterate best = it;
  double best_merit = kInf;
  for (; iter < options.max_iterations; ++iter) {
    const Metrics mt = evaluate(it);
    const double merit = std::max({mt.pres, mt.dres, std::min(mt.gap, mt.relgap)});
    if (merit < best_merit) {
      best_merit = merit;
      best = it;
    }
    if (converged(mt, 1.0)) {
      result.status = SolveStatus::kOptimal;
      finished = true;
      break;
    }
    if (mt.pinf_sign && mt.pinf < options.feasibility_tol) {
      result.status = SolveStatus::kInfeasible;
      finished = true;
      break;
    }
    if (mt.dinf_sign && mt.dinf < options.feasibility_tol) {
      result.status = SolveStatus::kUnbounded;
      finished = true;
      break;
    }

    const VectorXd rx = at * it.y + gt * it.z + sf.c * it.tau;
    const VectorXd ry = -(sf.A * it.x) + sf.b * it.tau;
    const VectorXd rz = -(sf.G * it.x) + sf.h * it.tau - it.s;
    const double rt = -sf.c.dot(it.x) - sf.b.dot(it.y) - sf.h.dot(it.z) - it.kappa;
    const double mu = (it.s.dot(it.z) + it.tau * it.kappa) / (cones.degree() + 1.0);

    const Scaling w = cones.scaling(it.s, it.z);
    if (!w.lambda.allFinite() || !kkt.factor(w)) break;

    VectorXd u1x, u1y, u1z;
    kkt.solve(-sf.c, sf.b, sf.h, u1x, u1y, u1z);
    const double u1_dot = sf.c.dot(u1x) + sf.b.dot(u1y) + sf.h.dot(u1z);

    struct Direction {
      VectorXd dx, dy, dz, ds;
      double dtau = 0.0;
      double dkappa = 0.0;
    };
    auto direction = [&](double sigma_res, const VectorXd& d_s, double d_kappa) {
      Direction d;
      const VectorXd e1 = -sigma_res * rx;
      const VectorXd e2 = -sigma_res * ry;
      const VectorXd e3 = -sigma_res * rz;
      const double e4 = -sigma_res * rt;
      const VectorXd wld = cones.apply_w(w, cones.jordan_solve(w.lambda, d_s));
      VectorXd u2x, u2y, u2z;
      kkt.solve(e1, -e2, -e3 - wld, u2x, u2y, u2z);
      const double num = e4 + d_kappa / it.tau + sf.c.dot(u2x) + sf.b.dot(u2y) + sf.h.dot(u2z);
      const double den = it.kappa / it.tau - u1_dot;
      d.dtau = num / den;
      d.dx = u2x + d.dtau * u1x;
      d.dy = u2y + d.dtau * u1y;
      d.dz = u2z + d.dtau * u1z;
      d.ds = wld - cones.apply_w(w, cones.apply_w(w, d.dz));
      d.dkappa = (d_kappa - it.kappa * d.dtau) / it.tau;
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double alpha = std::min(cones.max_step(w.lambda, cones.apply_winv(w, d.ds)),
                              cones.max_step(w.lambda, cones.apply_w(w, d.dz)));
      if (d.dtau < 0.0) alpha = std::min(alpha, -it.tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -it.kappa / d.dkappa);
      return alpha;
    };

    const VectorXd ll = cones.jordan(w.lambda, w.lambda);
    const Direction aff = direction(1.0, -ll, -it.tau * it.kappa);
    if (!aff.dx.allFinite() || !std::isfinite(aff.dtau)) break;
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    const VectorXd corr =
        cones.jordan(cones.apply_winv(w, aff.ds), cones.apply_w(w, aff.dz));
    const VectorXd d_s = -ll - corr + sigma * mu * e;
    const double d_kappa = -it.tau * it.kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Direction cmb = direction(1.0 - sigma, d_s, d_kappa);
    if (!cmb.dx.allFinite() || !std::isfinite(cmb.dtau)) break;
    const double alpha = std::min(1.0, 0.99 * step_length(cmb));
    if (!(alpha > 1e-12)) break;

    it.x += alpha * cmb.dx;
    it.y += alpha * cmb.dy;
    it.z += alpha * cmb.dz;
    it.s += alpha * cmb.ds;
    it.tau += alpha * cmb.dtau;
    it.kappa += alpha * cmb.dkappa;
  }
  result.iterations = iter;

  if (!finished) {
    // Fall back to the best point seen, accepted at looser tolerances.
    it = best;
    const Metrics mt = evaluate(it);
    if (converged(mt, 1e3)) result.status = SolveStatus::kOptimal;
    else if (mt.pinf_sign && mt.pinf < 1e3 * options.feasibility_tol)
      result.status = SolveStatus::kInfeasible;
  }
  if (result.status == SolveStatus::kOptimal) result.x = it.x / it.tau;
  return result;
}

}  // namespace jtprec::conic::detail

namespace jtprec::conic {

ConicSolution solve(const ConicProgram& program, const SolverOptions& options) {
  ConicSolution sol;
  const detail::StandardForm sf = detail::to_standard_form(program);
  const detail::IpmResult r = detail::solve_standard_form(sf, options);
  sol.iterations = r.iterations;
  sol.status = r.status;
  if (r.status == SolveStatus::kOptimal) {
    sol.x.assign(r.x.data(), r.x.data() + r.x.size());
    sol.objective = program.objective().evaluate(sol.x);
    sol.max_violation = program.max_violation(sol.x);
    if (!(sol.max_violation <= options.certify_tol)) sol.status = SolveStatus::kNumericalFailure;
  }
  return sol;
}

}  // namespace jtprec::conic
