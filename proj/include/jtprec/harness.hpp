#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jtprec/baselines.hpp"
#include "jtprec/bnb.hpp"
#include "jtprec/config.hpp"
#include "jtprec/ssocp.hpp"
#include "jtprec/wmmse.hpp"

namespace jtprec {

enum class Designer { kSsocp, kWmmse, kPso, kZf };

/// One legend entry: which designer, which interference model, and whether
/// it sees every link or only the thresholded feedback.
struct AlgorithmSpec {
  std::string token;
  Designer designer = Designer::kSsocp;
  SinrMode mode = SinrMode::kFull;
  bool full_csi = true;
};

/// SSOCP, SSOCP_0, SSOCP_lambda_PL0, SSOCP_PL0, MSE, MSE_lambda_PL0, PSO,
/// PSO_0, ZF. Throws ConfigError("algorithms", ...) for anything else.
AlgorithmSpec parse_algorithm(const std::string& token);

struct ExperimentConfig {
  Config scenario;  // scenario keys with defaults filled in
  std::uint64_t master_seed = 1;
  int drops = 200;
  std::vector<double> thresholds_db{3.0};
  std::vector<double> snrs_db{15.0};
  std::vector<AlgorithmSpec> algorithms;
  int workers = 1;
  bool record_timing = false;

  SsocpOptions ssocp;
  WmmseOptions wmmse;
  PsoOptions pso;
  BnbOptions bnb;
  std::vector<SinrMode> certify_modes{SinrMode::kFull, SinrMode::kLimitedLambda,
                                      SinrMode::kLimitedZero};
  std::vector<std::uint64_t> certify_seeds;  // explicit drop seeds; empty means derived
  int trace_drop = 0;

  /// Throws ConfigError naming the offending key.
  static ExperimentConfig from_config(const Config& config);
};

/// Drop seed for drop index d under a master seed.
std::uint64_t drop_seed(std::uint64_t master_seed, int drop);
/// Seed handed to the randomized designers for one drop.
std::uint64_t solver_seed(std::uint64_t drop_seed);

struct RateRow {
  int drop_id = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string mode;
  double threshold_db = 0.0;
  double edge_snr_db = 0.0;
  int n_t = 0;
  int num_users = 0;
  double expected_rate = 0.0;
  double actual_rate = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  double wall_ms = -1.0;  // negative when timing is off
  long long csi_coeffs = 0;
  long long precoder_weights = 0;
  bool support_matches = true;
  std::string status = "ok";
};

struct BoundRow {
  int drop_id = 0;
  std::string mode;
  double bb_ub = 0.0;
  double bb_lb = 0.0;
  double ssocp_rate = 0.0;
  int rounds = 0;
  long long feasibility_calls = 0;
  bool converged = false;
};

struct TraceRow {
  int drop_id = 0;
  std::string algorithm;
  int restart = 0;
  int iteration = 0;
  double objective = 0.0;
};

struct SummaryRow {
  std::string algorithm;
  double threshold_db = 0.0;
  double edge_snr_db = 0.0;
  int samples = 0;
  double mean_expected = 0.0;
  double mean_actual = 0.0;
  double mean_csi_coeffs = 0.0;
  double mean_precoder_weights = 0.0;
};

struct CdfRow {
  std::string algorithm;
  double threshold_db = 0.0;
  double edge_snr_db = 0.0;
  double value = 0.0;
  double probability = 0.0;
};

struct ExperimentTables {
  std::vector<RateRow> rates;
  std::vector<BoundRow> bounds;
  std::vector<TraceRow> traces;
  std::vector<SummaryRow> summary;
  std::vector<CdfRow> cdf;
  std::vector<std::string> outputs;  // CSV files the producing command owns
};

/// Rates for every drop x SNR x threshold x algorithm, plus per-cell means
/// and CDFs of the actual rate. Rows follow drop order regardless of workers.
ExperimentTables run_experiment(const ExperimentConfig& config);

/// Branch-and-bound bounds and an SSOCP reference rate per drop and mode at
/// the first threshold and SNR.
ExperimentTables run_certify(const ExperimentConfig& config);

/// Per-iteration objective of every restart of every algorithm on one drop.
ExperimentTables run_trace(const ExperimentConfig& config);

/// Distinct sorted values, each with the fraction k/n of samples at or below
/// it; tied samples collapse into one point.
/// Throws std::invalid_argument on empty input.
std::vector<std::pair<double, double>> cdf_points(std::vector<double> samples);

void write_rates_csv(std::ostream& out, const std::vector<RateRow>& rows);
void write_bounds_csv(std::ostream& out, const std::vector<BoundRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_cdf_csv(std::ostream& out, const std::vector<CdfRow>& rows);

/// Writes every table listed in `tables.outputs` into `dir`, creating it if
/// needed; empty tables still get a header. Returns the paths written.
std::vector<std::string> write_tables(const std::string& dir, const ExperimentTables& tables);

}  // namespace jtprec
