#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "jtprec/conic.hpp"

using namespace jtprec::conic;

namespace {

// Independent residual check rebuilt from the program description.
double recheck(const ConicProgram& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& c : p.linear_constraints()) {
    double v = c.expr.constant();
    for (const auto& t : c.expr.terms()) v += t.coef * x[static_cast<std::size_t>(t.var)];
    worst = std::max(worst, c.relation == Relation::kEqual ? std::abs(v) : v);
  }
  for (const auto& c : p.soc_constraints()) {
    double sq = 0.0;
    for (const auto& e : c.head) {
      double v = e.constant();
      for (const auto& t : e.terms()) v += t.coef * x[static_cast<std::size_t>(t.var)];
      sq += v * v;
    }
    double b = c.bound.constant();
    for (const auto& t : c.bound.terms()) b += t.coef * x[static_cast<std::size_t>(t.var)];
    worst = std::max(worst, std::sqrt(sq) - b);
  }
  return worst;
}

}  // namespace

TEST_CASE("soc with constant head: minimize x s.t. ||1|| <= x") {
  ConicProgram p;
  const int x = p.add_variable();
  p.add_soc({AffineExpr(1.0)}, AffineExpr::variable(x));
  p.minimize(AffineExpr::variable(x));
  const auto sol = solve(p);
  REQUIRE(sol.optimal());
  CHECK(sol.value(x) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("contradictory bounds are infeasible") {
  ConicProgram p;
  const int x = p.add_variable();
  p.add_upper_bound(x, 0.0);
  p.add_lower_bound(x, 1.0);
  p.minimize(AffineExpr::variable(x));
  CHECK(solve(p).status == SolveStatus::kInfeasible);
}

TEST_CASE("power cone boundary for one complex weight") {
  const double p_max = 2.5;
  ConicProgram p;
  const auto plan = complex_to_real_embedding(1, p.add_variables(2));
  p.add_soc({AffineExpr::variable(plan.re(0)), AffineExpr::variable(plan.im(0))},
            AffineExpr(std::sqrt(p_max)));
  p.maximize(AffineExpr::variable(plan.re(0)));
  const auto sol = solve(p);
  REQUIRE(sol.optimal());
  const double mag = std::hypot(sol.value(plan.re(0)), sol.value(plan.im(0)));
  CHECK(mag == doctest::Approx(std::sqrt(p_max)).epsilon(1e-7));
}

TEST_CASE("complex embedding plan") {
  const auto plan = complex_to_real_embedding(1);
  CHECK(plan.re(0) == 0);
  CHECK(plan.im(0) == 1);
  const auto wide = complex_to_real_embedding(3, 10);
  CHECK(wide.re(2) == 14);
  CHECK(wide.im(2) == 15);
  CHECK_THROWS(complex_to_real_embedding(0));

  // |3+4i| as an SOC bound
  ConicProgram p;
  const int re = p.add_variable();
  const int im = p.add_variable();
  const int t = p.add_variable();
  p.add_equal(AffineExpr::variable(re), AffineExpr(3.0));
  p.add_equal(AffineExpr::variable(im), AffineExpr(4.0));
  p.add_soc({AffineExpr::variable(re), AffineExpr::variable(im)}, AffineExpr::variable(t));
  p.minimize(AffineExpr::variable(t));
  const auto sol = solve(p);
  REQUIRE(sol.optimal());
  CHECK(sol.value(t) == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("geometric mean epigraph with fixed inputs") {
  auto geo = [](const std::vector<double>& vals) {
    ConicProgram p;
    std::vector<int> vars;
    for (double v : vals) {
      const int x = p.add_variable();
      p.add_equal(AffineExpr::variable(x), AffineExpr(v));
      vars.push_back(x);
    }
    const int t = geo_mean_epigraph(p, vars);
    p.maximize(AffineExpr::variable(t));
    const auto sol = solve(p);
    REQUIRE(sol.optimal());
    return sol.value(t);
  };
  CHECK(geo({4.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(geo({3.7}) == doctest::Approx(3.7).epsilon(1e-7));
  CHECK(std::abs(geo({1.0, 2.0, 4.0, 8.0}) - std::pow(64.0, 0.25)) < 1e-6);

  ConicProgram empty;
  CHECK_THROWS(geo_mean_epigraph(empty, std::vector<int>{}));
}

TEST_CASE("geometric mean matches closed form on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 8;
    std::vector<double> xs(static_cast<std::size_t>(n));
    double log_sum = 0.0;
    for (auto& v : xs) {
      v = val(rng);
      log_sum += std::log(v);
    }
    ConicProgram p;
    std::vector<int> vars;
    for (double v : xs) {
      const int x = p.add_variable();
      p.add_equal(AffineExpr::variable(x), AffineExpr(v));
      vars.push_back(x);
    }
    const int t = geo_mean_epigraph(p, vars);
    p.maximize(AffineExpr::variable(t));
    const auto sol = solve(p);
    INFO("trial " << trial << " n " << n << " status " << to_string(sol.status));
    REQUIRE(sol.optimal());
    CHECK(std::abs(sol.value(t) - std::exp(log_sum / n)) < 1e-6);
  }
}

TEST_CASE("random feasible SOCPs certify against an independent residual check") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 6;
    ConicProgram p;
    p.add_variables(n);
    // ||x - c|| <= r keeps it bounded and feasible
    std::vector<AffineExpr> head;
    for (int j = 0; j < n; ++j) head.push_back(AffineExpr::variable(j).add_constant(-g(rng)));
    p.add_soc(head, AffineExpr(1.0 + std::abs(g(rng))));
    for (int k = 0; k < 3; ++k) {
      std::vector<AffineExpr> h2;
      AffineExpr bound(3.0);
      for (int r = 0; r < 2; ++r) {
        AffineExpr e;
        for (int j = 0; j < n; ++j) e.add(j, 0.3 * g(rng));
        h2.push_back(e);
      }
      for (int j = 0; j < n; ++j) bound.add(j, 0.1 * g(rng));
      p.add_soc(h2, bound);
    }
    AffineExpr lin;
    for (int j = 0; j < n; ++j) lin.add(j, g(rng));
    p.add_less_equal(lin, AffineExpr(2.0));
    AffineExpr obj;
    for (int j = 0; j < n; ++j) obj.add(j, g(rng));
    p.maximize(obj);
    const auto sol = solve(p);
    if (sol.status == SolveStatus::kInfeasible) continue;
    REQUIRE(sol.optimal());
    ++solved;
    CHECK(recheck(p, sol.x) <= 1e-7);
  }
  CHECK(solved > 30);
}

TEST_CASE("program validation") {
  ConicProgram p;
  p.add_variable();
  p.add_soc({}, AffineExpr(1.0));
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  ConicProgram q;
  q.add_variable();
  q.add_less_equal(AffineExpr::variable(5), AffineExpr(1.0));
  CHECK_THROWS_AS(solve(q), std::invalid_argument);
}

TEST_CASE("triplet dump lists every nonzero") {
  ConicProgram p;
  const int x = p.add_variable();
  p.add_soc({AffineExpr(1.0)}, AffineExpr::variable(x));
  p.minimize(AffineExpr::variable(x));
  std::ostringstream out;
  dump_triplets(p, out);
  const std::string s = out.str();
  CHECK(s.find("c 0 1") != std::string::npos);
  CHECK(s.find("G 0 0 -1") != std::string::npos);
  CHECK(s.find("h 1 1") != std::string::npos);
  CHECK(s.find("q 2") != std::string::npos);
}
