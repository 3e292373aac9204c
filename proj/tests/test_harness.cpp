#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jtprec/harness.hpp"

using namespace jtprec;

namespace {

Config small_run() {
  Config c;
  c.set("drops", "3");
  c.set("seed", "7");
  c.set("thresholds_db", "0, 3, inf");
  c.set("algorithms", "SSOCP, SSOCP_0, SSOCP_lambda_PL0, SSOCP_PL0, MSE, PSO_0, ZF");
  c.set("pso.iterations", "20");
  c.set("pso.restarts", "1");
  c.set("pso.swarm", "10");
  c.set("ssocp.max_retries", "2");
  return c;
}

std::string rates_text(const ExperimentTables& t) {
  std::ostringstream s;
  write_rates_csv(s, t.rates);
  write_summary_csv(s, t.summary);
  write_cdf_csv(s, t.cdf);
  return s.str();
}

std::string key_of(const Config& c) {
  try {
    ExperimentConfig::from_config(c);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "none";
}

}  // namespace

TEST_CASE("algorithm tokens") {
  CHECK(parse_algorithm("SSOCP").mode == SinrMode::kFull);
  CHECK(parse_algorithm("SSOCP").full_csi);
  CHECK(parse_algorithm("SSOCP_0").mode == SinrMode::kLimitedZero);
  CHECK(parse_algorithm("SSOCP_lambda_PL0").mode == SinrMode::kLimitedLambda);
  CHECK(parse_algorithm("SSOCP_λPL0").token == "SSOCP_lambda_PL0");
  CHECK(parse_algorithm("SSOCP_PL0").mode == SinrMode::kLimitedNaive);
  CHECK(parse_algorithm("MSE").designer == Designer::kWmmse);
  CHECK(parse_algorithm("MSE_λPL0").mode == SinrMode::kLimitedLambda);
  CHECK_FALSE(parse_algorithm("MSE_lambda_PL0").full_csi);
  CHECK(parse_algorithm("PSO").designer == Designer::kPso);
  CHECK(parse_algorithm("PSO_0").mode == SinrMode::kLimitedZero);
  CHECK(parse_algorithm("ZF").designer == Designer::kZf);
  try {
    parse_algorithm("SSOCP_X");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "algorithms");
    CHECK(std::string(e.what()).find("SSOCP_X") != std::string::npos);
  }
}

TEST_CASE("empirical CDF points") {
  const auto p = cdf_points({3.0, 1.0, 2.0, 2.0});
  REQUIRE(p.size() == 3);
  CHECK(p[0] == std::make_pair(1.0, 0.25));
  CHECK(p[1] == std::make_pair(2.0, 0.75));
  CHECK(p[2] == std::make_pair(3.0, 1.0));
  CHECK(cdf_points({5.0}) == std::vector<std::pair<double, double>>{{5.0, 1.0}});
  CHECK_THROWS_AS(cdf_points({}), std::invalid_argument);
}

TEST_CASE("drop and solver seeds are distinct streams") {
  CHECK(drop_seed(1, 0) != drop_seed(1, 1));
  CHECK(drop_seed(1, 0) != drop_seed(2, 0));
  CHECK(solver_seed(drop_seed(1, 0)) != drop_seed(1, 0));
  CHECK(drop_seed(5, 3) == drop_seed(5, 3));
}

TEST_CASE("zero drops give empty tables with headers") {
  Config c;
  c.set("drops", "0");
  const ExperimentTables t = run_experiment(ExperimentConfig::from_config(c));
  CHECK(t.rates.empty());
  CHECK(t.summary.empty());
  CHECK(t.cdf.empty());
  std::ostringstream s;
  write_rates_csv(s, t.rates);
  CHECK(s.str().rfind("drop_id,seed,algorithm,mode,threshold_db,edge_snr_db,n_t,num_users,"
                      "expected_rate_bps_hz,actual_rate_bps_hz,iterations,restarts_used,wall_ms,"
                      "csi_coeffs,precoder_weights,status\n",
                      0) == 0);
}

TEST_CASE("experiment rows are complete, valid and reproducible") {
  const ExperimentConfig cfg = ExperimentConfig::from_config(small_run());
  const ExperimentTables a = run_experiment(cfg);
  REQUIRE(a.rates.size() == 3 * 3 * 7);
  for (const RateRow& r : a.rates) {
    INFO(r.algorithm << " drop " << r.drop_id << " T " << r.threshold_db << " " << r.status);
    CHECK(r.status == "ok");
    CHECK(r.support_matches);
    CHECK(r.wall_ms < 0.0);
    CHECK(r.expected_rate >= 0.0);
    CHECK(r.actual_rate >= 0.0);
    CHECK(r.csi_coeffs > 0);
    CHECK(r.seed == drop_seed(7, r.drop_id));
    if (r.algorithm == "ZF") CHECK(r.precoder_weights == 9);
  }
  // Full-CSI designs ignore the threshold.
  for (const RateRow& r : a.rates)
    for (const RateRow& q : a.rates)
      if (r.drop_id == q.drop_id && r.algorithm == q.algorithm && parse_algorithm(r.algorithm).full_csi)
        CHECK(r.actual_rate == q.actual_rate);
  // With T = inf the limited designs see every link, so the zero and
  // long-term models coincide with full CSI.
  for (const RateRow& r : a.rates)
    if (std::isinf(r.threshold_db) && r.algorithm != "ZF") CHECK(r.expected_rate == doctest::Approx(r.actual_rate).epsilon(1e-9));

  CHECK(a.summary.size() == 3 * 7);
  for (const SummaryRow& s : a.summary) CHECK(s.samples == 3);

  ExperimentConfig threaded = cfg;
  threaded.workers = 3;
  CHECK(rates_text(run_experiment(threaded)) == rates_text(a));
  CHECK(rates_text(run_experiment(cfg)) == rates_text(a));
}

TEST_CASE("timing is recorded only on request") {
  Config c = small_run();
  c.set("drops", "1");
  c.set("algorithms", "SSOCP_lambda_PL0");
  c.set("record_timing", "true");
  for (const RateRow& r : run_experiment(ExperimentConfig::from_config(c)).rates) CHECK(r.wall_ms >= 0.0);
}

TEST_CASE("written tables round-trip to disk") {
  Config c = small_run();
  c.set("drops", "1");
  c.set("algorithms", "SSOCP_0");
  const ExperimentTables t = run_experiment(ExperimentConfig::from_config(c));
  const auto dir = std::filesystem::temp_directory_path() / "jtprec_harness_test";
  std::filesystem::remove_all(dir);
  const auto paths = write_tables(dir.string(), t);
  CHECK(paths.size() == 3);
  std::ifstream in(dir / "rates.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("certify and trace tables") {
  Config c;
  c.set("drops", "1");
  c.set("num_users", "2");
  c.set("certify.modes", "limited_lambda, limited_zero");
  const ExperimentTables b = run_certify(ExperimentConfig::from_config(c));
  REQUIRE(b.bounds.size() == 2);
  for (const BoundRow& r : b.bounds) {
    CHECK(r.bb_lb <= r.bb_ub);
    CHECK(r.ssocp_rate <= r.bb_ub + 1e-6);
  }
  CHECK(b.outputs == std::vector<std::string>{"bounds.csv"});

  c.set("algorithms", "SSOCP_lambda_PL0, MSE");
  const ExperimentTables t = run_trace(ExperimentConfig::from_config(c));
  CHECK_FALSE(t.traces.empty());
  for (const TraceRow& r : t.traces) CHECK(r.drop_id == 0);
}

TEST_CASE("experiment configuration errors name the key") {
  auto with = [](const std::string& k, const std::string& v) {
    Config c;
    c.set(k, v);
    return key_of(c);
  };
  CHECK(with("drops", "-1") == "drops");
  CHECK(with("thresholds_db", "-3") == "thresholds_db");
  CHECK(with("snrs_db", "inf") == "snrs_db");
  CHECK(with("algorithms", "FOO") == "algorithms");
  CHECK(with("workers", "0") == "workers");
  CHECK(with("ssocp.max_retries", "0") == "ssocp");
  CHECK(with("wmmse.restarts", "0") == "wmmse");
  CHECK(with("pso.swarm", "0") == "pso");
  CHECK(with("bnb.epsilon", "0") == "bnb");
  CHECK(with("ssocp.mode", "psychic") == "ssocp.mode");
  CHECK(with("certify.modes", "full, bogus") == "certify.modes");
  CHECK(with("certify.seeds", "1.5") == "certify.seeds");
  CHECK(with("num_users", "0") == "num_users");
  CHECK(with("drops", "ten") == "drops");
  CHECK(key_of(Config{}) == "none");
}

TEST_CASE("experiment defaults") {
  const ExperimentConfig cfg = ExperimentConfig::from_config(Config{});
  CHECK(cfg.drops == 200);
  CHECK(cfg.master_seed == 1);
  CHECK(cfg.thresholds_db == std::vector<double>{3.0});
  CHECK(cfg.snrs_db == std::vector<double>{15.0});
  REQUIRE(cfg.algorithms.size() == 4);
  CHECK(cfg.algorithms[0].token == "SSOCP");
  CHECK(cfg.algorithms[3].token == "SSOCP_PL0");
  CHECK(cfg.wmmse.restarts == 1);
  CHECK(cfg.ssocp.max_retries == 5);
  CHECK(cfg.certify_modes.size() == 3);
}
