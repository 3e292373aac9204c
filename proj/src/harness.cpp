#include "jtprec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "jtprec/metrics.hpp"
#include "jtprec/scenario.hpp"

namespace jtprec {

AlgorithmSpec parse_algorithm(const std::string& token) {
  static const std::map<std::string, AlgorithmSpec> table = {
      {"SSOCP", {"SSOCP", Designer::kSsocp, SinrMode::kFull, true}},
      {"SSOCP_0", {"SSOCP_0", Designer::kSsocp, SinrMode::kLimitedZero, false}},
      {"SSOCP_lambda_PL0", {"SSOCP_lambda_PL0", Designer::kSsocp, SinrMode::kLimitedLambda, false}},
      {"SSOCP_λPL0", {"SSOCP_lambda_PL0", Designer::kSsocp, SinrMode::kLimitedLambda, false}},
      {"SSOCP_PL0", {"SSOCP_PL0", Designer::kSsocp, SinrMode::kLimitedNaive, false}},
      {"MSE", {"MSE", Designer::kWmmse, SinrMode::kFull, true}},
      {"MSE_lambda_PL0", {"MSE_lambda_PL0", Designer::kWmmse, SinrMode::kLimitedLambda, false}},
      {"MSE_λPL0", {"MSE_lambda_PL0", Designer::kWmmse, SinrMode::kLimitedLambda, false}},
      {"PSO", {"PSO", Designer::kPso, SinrMode::kFull, true}},
      {"PSO_0", {"PSO_0", Designer::kPso, SinrMode::kLimitedZero, false}},
      {"ZF", {"ZF", Designer::kZf, SinrMode::kFull, true}},
  };
  const auto it = table.find(token);
  if (it == table.end()) throw ConfigError("algorithms", "unknown algorithm '" + token + "'");
  return it->second;
}

ExperimentConfig ExperimentConfig::from_config(const Config& config) {
  ExperimentConfig out;
  out.scenario = default_scenario_config();
  for (const auto& [k, v] : config.values()) out.scenario.set(k, v);
  build_scenario(out.scenario);  // reject bad scenario keys early

  const Config& c = out.scenario;
  out.master_seed = c.has("seed") ? c.get_uint64("seed") : 1;
  out.drops = static_cast<int>(c.get_int_or("drops", 200));
  if (out.drops < 0) throw ConfigError("drops", "must be >= 0");
  if (c.has("thresholds_db")) out.thresholds_db = c.get_doubles("thresholds_db");
  for (double t : out.thresholds_db)
    if (!(t >= 0.0)) throw ConfigError("thresholds_db", "thresholds must be >= 0 or inf");
  out.snrs_db = c.has("snrs_db") ? c.get_doubles("snrs_db")
                                 : std::vector<double>{c.get_double("cell_edge_snr_db")};
  for (double s : out.snrs_db)
    if (!std::isfinite(s)) throw ConfigError("snrs_db", "SNRs must be finite");
  const std::vector<std::string> algs =
      c.has("algorithms") ? c.get_strings("algorithms")
                          : std::vector<std::string>{"SSOCP", "SSOCP_0", "SSOCP_lambda_PL0",
                                                     "SSOCP_PL0"};
  for (const auto& a : algs) out.algorithms.push_back(parse_algorithm(a));
  out.workers = static_cast<int>(c.get_int_or("workers", 1));
  if (out.workers < 1) throw ConfigError("workers", "must be >= 1");
  out.record_timing = c.get_bool_or("record_timing", false);

  auto mode_key = [&](const std::string& key, SinrMode fallback) {
    if (!c.has(key)) return fallback;
    try {
      return parse_sinr_mode(c.get_string(key));
    } catch (const std::exception& e) {
      throw ConfigError(key, e.what());
    }
  };
  auto checked = [](const std::string& prefix, auto validate) {
    try {
      validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(prefix, e.what());
    }
  };

  out.ssocp.max_retries = static_cast<int>(c.get_int_or("ssocp.max_retries", 5));
  out.ssocp.max_iter = static_cast<int>(c.get_int_or("ssocp.max_iter", 30));
  out.ssocp.rel_tol = c.get_double_or("ssocp.rel_tol", 1e-3);
  out.ssocp.mode = mode_key("ssocp.mode", SinrMode::kLimitedLambda);
  checked("ssocp", [&] { out.ssocp.validate(); });

  out.wmmse.max_iter = static_cast<int>(c.get_int_or("wmmse.max_iter", 200));
  out.wmmse.rel_tol = c.get_double_or("wmmse.rel_tol", 1e-4);
  out.wmmse.restarts = static_cast<int>(c.get_int_or("wmmse.restarts", 1));
  out.wmmse.mode = mode_key("wmmse.mode", SinrMode::kLimitedLambda);
  checked("wmmse", [&] { out.wmmse.validate(); });

  out.pso.swarm = static_cast<int>(c.get_int_or("pso.swarm", 40));
  out.pso.iterations = static_cast<int>(c.get_int_or("pso.iterations", 300));
  out.pso.inertia = c.get_double_or("pso.inertia", 0.7);
  out.pso.cognitive = c.get_double_or("pso.cognitive", 1.5);
  out.pso.social = c.get_double_or("pso.social", 1.5);
  out.pso.restarts = static_cast<int>(c.get_int_or("pso.restarts", 5));
  out.pso.mode = mode_key("pso.mode", SinrMode::kLimitedZero);
  checked("pso", [&] { out.pso.validate(); });

  out.bnb.epsilon = c.get_double_or("bnb.epsilon", 0.1);
  out.bnb.max_iter = static_cast<int>(c.get_int_or("bnb.max_iter", 100));
  out.bnb.bisection_epsilon = c.get_double_or("bnb.bisection_epsilon", 0.01);
  out.bnb.swapped_bounds = c.get_bool_or("bnb.swapped_bounds", false);
  checked("bnb", [&] { out.bnb.validate(); });

  if (c.has("certify.modes")) {
    out.certify_modes.clear();
    for (const auto& m : c.get_strings("certify.modes")) {
      try {
        out.certify_modes.push_back(parse_sinr_mode(m));
      } catch (const std::exception& e) {
        throw ConfigError("certify.modes", e.what());
      }
    }
  }
  if (c.has("certify.seeds"))
    for (double s : c.get_doubles("certify.seeds")) {
      if (!(s >= 0.0) || s != std::floor(s)) throw ConfigError("certify.seeds", "seeds are integers");
      out.certify_seeds.push_back(static_cast<std::uint64_t>(s));
    }
  out.trace_drop = static_cast<int>(c.get_int_or("trace.drop", 0));
  if (out.trace_drop < 0) throw ConfigError("trace.drop", "must be >= 0");
  return out;
}

std::uint64_t drop_seed(std::uint64_t master_seed, int drop) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(drop));
}

std::uint64_t solver_seed(std::uint64_t drop) { return derive_seed(drop, 1); }

namespace {

struct Outcome {
  Precoder precoder;
  SolveTrace trace;
  int restarts_used = 1;
};

Outcome design(const AlgorithmSpec& spec, const ExperimentConfig& cfg,
               const ChannelRealization& real, const MaskedCsi& csi, std::uint64_t seed) {
  Outcome out;
  switch (spec.designer) {
    case Designer::kSsocp: {
      SsocpOptions o = cfg.ssocp;
      o.mode = spec.mode;
      o.rng_seed = seed;
      DesignResult r = ssocp_solve(csi, o);
      out.precoder = std::move(r.precoder);
      out.trace = std::move(r.trace);
      out.restarts_used = static_cast<int>(out.trace.objective.size());
      break;
    }
    case Designer::kWmmse: {
      WmmseOptions o = cfg.wmmse;
      o.mode = spec.mode;
      o.rng_seed = seed;
      DesignResult r = wmmse_solve(csi, o);
      out.precoder = std::move(r.precoder);
      out.trace = std::move(r.trace);
      out.restarts_used = static_cast<int>(out.trace.objective.size());
      break;
    }
    case Designer::kPso: {
      PsoOptions o = cfg.pso;
      o.mode = spec.mode;
      o.rng_seed = seed;
      DesignResult r = pso_solve(csi, o);
      out.precoder = std::move(r.precoder);
      out.trace = std::move(r.trace);
      out.restarts_used = static_cast<int>(out.trace.objective.size());
      break;
    }
    case Designer::kZf:
      out.precoder = zf_precoder(real, csi.p_max);
      out.trace.iterations = 0;
      break;
  }
  return out;
}

// Evaluates a finished design and re-validates its support and power.
void fill_row(RateRow& row, const AlgorithmSpec& spec, const Outcome& o,
              const ChannelRealization& real, const MaskedCsi& csi) {
  const CooperationMap& coop = csi.coop;
  row.support_matches = spec.designer == Designer::kZf ? o.precoder.num_blocks() == coop.num_links()
                                                       : o.precoder.support_equals(coop);
  row.expected_rate = weighted_sum_rate(design_sinr(csi, o.precoder, spec.mode), csi.weights);
  row.actual_rate =
      weighted_sum_rate(true_sinr(real, o.precoder, csi.noise_power), csi.weights);
  row.iterations = o.trace.iterations;
  row.restarts_used = o.restarts_used;
  row.csi_coeffs = backhaul_load(coop, csi.n_t).csi_coefficients;
  row.precoder_weights = static_cast<long long>(o.precoder.num_blocks()) * o.precoder.n_t;
  if (!row.support_matches)
    row.status = "support_mismatch";
  else if (!o.precoder.satisfies_power(csi.p_max))
    row.status = "power_violation";
}

std::string one_line(std::string text) {
  std::replace_if(text.begin(), text.end(), [](char ch) { return ch == ',' || ch == '\n'; }, ';');
  return text;
}

// Runs `work(i)` for i in [0, n) on up to `workers` threads; rethrows the
// first failure after every thread has stopped.
void parallel_for(int n, int workers, const std::function<void(int)>& work) {
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min(workers, std::max(n, 1));
  if (threads <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

Scenario scenario_at(const ExperimentConfig& cfg, double snr_db) {
  Config c = cfg.scenario;
  std::ostringstream s;
  s << std::setprecision(17) << snr_db;
  c.set("cell_edge_snr_db", s.str());
  return build_scenario(c);
}

std::vector<RateRow> run_drop(const ExperimentConfig& cfg, const std::vector<Scenario>& scenarios,
                              int drop) {
  std::vector<RateRow> rows;
  const std::uint64_t seed = drop_seed(cfg.master_seed, drop);
  const std::uint64_t designer_seed = solver_seed(seed);
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    const Scenario& sc = scenarios[si];
    const ChannelRealization real = draw_drop(sc, seed);
    const MaskedCsi full = mask_csi(real, CooperationMap::full(sc.num_bs, sc.num_users), sc);
    struct Cached {
      std::optional<Outcome> outcome;
      std::string error;
      double ms = 0.0;
    };
    std::map<std::string, Cached> full_cache;

    for (double t : cfg.thresholds_db) {
      const MaskedCsi limited = mask_csi(real, relative_threshold(real, t), sc);
      for (const AlgorithmSpec& spec : cfg.algorithms) {
        RateRow row;
        row.drop_id = drop;
        row.seed = seed;
        row.algorithm = spec.token;
        row.mode = to_string(spec.mode);
        row.threshold_db = t;
        row.edge_snr_db = cfg.snrs_db[si];
        row.n_t = sc.n_t;
        row.num_users = sc.num_users;
        const MaskedCsi& csi = spec.full_csi ? full : limited;
        try {
          // Full-CSI designs do not depend on the threshold; compute once.
          std::optional<Outcome> local;
          const Outcome* o = nullptr;
          double ms = 0.0;
          if (spec.full_csi) {
            auto it = full_cache.find(spec.token);
            if (it == full_cache.end()) {
              const auto start = std::chrono::steady_clock::now();
              Cached entry;
              try {
                entry.outcome = design(spec, cfg, real, csi, designer_seed);
              } catch (const std::exception& e) {
                entry.error = e.what();
              }
              entry.ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
              it = full_cache.emplace(spec.token, std::move(entry)).first;
            }
            ms = it->second.ms;
            if (!it->second.outcome) throw std::runtime_error(it->second.error);
            o = &*it->second.outcome;
          } else {
            const auto start = std::chrono::steady_clock::now();
            local = design(spec, cfg, real, csi, designer_seed);
            ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                     .count();
            o = &*local;
          }
          if (cfg.record_timing) row.wall_ms = ms;
          fill_row(row, spec, *o, real, csi);
        } catch (const std::exception& e) {
          row.status = "error: " + one_line(e.what());
          row.csi_coeffs = backhaul_load(csi.coop, csi.n_t).csi_coefficients;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void summarize(ExperimentTables& tables) {
  using Key = std::tuple<std::size_t, double, double>;  // first appearance keeps order
  std::map<std::tuple<std::string, double, double>, std::size_t> index;
  std::vector<std::pair<Key, std::vector<const RateRow*>>> groups;
  for (const RateRow& r : tables.rates) {
    if (r.status != "ok") continue;
    const auto key = std::make_tuple(r.algorithm, r.threshold_db, r.edge_snr_db);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.push_back({{groups.size(), r.threshold_db, r.edge_snr_db}, {}});
    }
    groups[it->second].second.push_back(&r);
  }
  for (const auto& [key, rows] : groups) {
    SummaryRow s;
    s.algorithm = rows.front()->algorithm;
    s.threshold_db = std::get<1>(key);
    s.edge_snr_db = std::get<2>(key);
    s.samples = static_cast<int>(rows.size());
    std::vector<double> actual;
    for (const RateRow* r : rows) {
      s.mean_expected += r->expected_rate;
      s.mean_actual += r->actual_rate;
      s.mean_csi_coeffs += static_cast<double>(r->csi_coeffs);
      s.mean_precoder_weights += static_cast<double>(r->precoder_weights);
      actual.push_back(r->actual_rate);
    }
    const double n = static_cast<double>(rows.size());
    s.mean_expected /= n;
    s.mean_actual /= n;
    s.mean_csi_coeffs /= n;
    s.mean_precoder_weights /= n;
    tables.summary.push_back(s);
    for (const auto& [value, p] : cdf_points(std::move(actual)))
      tables.cdf.push_back({s.algorithm, s.threshold_db, s.edge_snr_db, value, p});
  }
}

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

}  // namespace

ExperimentTables run_experiment(const ExperimentConfig& cfg) {
  std::vector<Scenario> scenarios;
  for (double snr : cfg.snrs_db) scenarios.push_back(scenario_at(cfg, snr));

  std::vector<std::vector<RateRow>> per_drop(static_cast<std::size_t>(cfg.drops));
  parallel_for(cfg.drops, cfg.workers, [&](int d) {
    per_drop[static_cast<std::size_t>(d)] = run_drop(cfg, scenarios, d);
  });

  ExperimentTables tables;
  tables.outputs = {"rates.csv", "summary.csv", "cdf.csv"};
  for (auto& rows : per_drop)
    for (auto& r : rows) tables.rates.push_back(std::move(r));
  summarize(tables);
  return tables;
}

ExperimentTables run_certify(const ExperimentConfig& cfg) {
  if (cfg.thresholds_db.empty() || cfg.snrs_db.empty())
    throw ConfigError("thresholds_db", "certify needs a threshold and an SNR");
  const Scenario sc = scenario_at(cfg, cfg.snrs_db.front());
  const double threshold = cfg.thresholds_db.front();

  std::vector<std::uint64_t> seeds = cfg.certify_seeds;
  if (seeds.empty())
    for (int d = 0; d < cfg.drops; ++d) seeds.push_back(drop_seed(cfg.master_seed, d));

  std::vector<std::vector<BoundRow>> per_drop(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), cfg.workers, [&](int d) {
    const std::uint64_t seed = seeds[static_cast<std::size_t>(d)];
    const ChannelRealization real = draw_drop(sc, seed);
    for (SinrMode mode : cfg.certify_modes) {
      const CooperationMap coop = mode == SinrMode::kFull
                                      ? CooperationMap::full(sc.num_bs, sc.num_users)
                                      : relative_threshold(real, threshold);
      const MaskedCsi csi = mask_csi(real, coop, sc);
      BnbOptions bo = cfg.bnb;
      bo.mode = mode;
      const BnbResult bb = branch_and_bound(csi, bo);
      SsocpOptions so = cfg.ssocp;
      so.mode = mode;
      so.rng_seed = solver_seed(seed);
      BoundRow row;
      row.drop_id = d;
      row.mode = to_string(mode);
      row.bb_ub = bb.bb_ub;
      row.bb_lb = bb.bb_lb;
      row.ssocp_rate = ssocp_solve(csi, so).design_rate;
      row.rounds = bb.rounds;
      row.feasibility_calls = bb.feasibility_calls;
      row.converged = bb.converged;
      per_drop[static_cast<std::size_t>(d)].push_back(row);
    }
  });

  ExperimentTables tables;
  tables.outputs = {"bounds.csv"};
  for (auto& rows : per_drop)
    for (auto& r : rows) tables.bounds.push_back(r);
  return tables;
}

ExperimentTables run_trace(const ExperimentConfig& cfg) {
  if (cfg.thresholds_db.empty() || cfg.snrs_db.empty())
    throw ConfigError("thresholds_db", "trace needs a threshold and an SNR");
  const Scenario sc = scenario_at(cfg, cfg.snrs_db.front());
  const std::uint64_t seed = drop_seed(cfg.master_seed, cfg.trace_drop);
  const ChannelRealization real = draw_drop(sc, seed);
  const MaskedCsi full = mask_csi(real, CooperationMap::full(sc.num_bs, sc.num_users), sc);
  const MaskedCsi limited = mask_csi(real, relative_threshold(real, cfg.thresholds_db.front()), sc);

  ExperimentTables tables;
  tables.outputs = {"trace.csv"};
  for (const AlgorithmSpec& spec : cfg.algorithms) {
    const Outcome o = design(spec, cfg, real, spec.full_csi ? full : limited, solver_seed(seed));
    for (std::size_t r = 0; r < o.trace.objective.size(); ++r)
      for (std::size_t k = 0; k < o.trace.objective[r].size(); ++k)
        tables.traces.push_back({cfg.trace_drop, spec.token, static_cast<int>(r),
                                 static_cast<int>(k), o.trace.objective[r][k]});
  }
  return tables;
}

std::vector<std::pair<double, double>> cdf_points(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("cdf_points needs at least one sample");
  std::stable_sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double p = static_cast<double>(i + 1) / n;
    if (!out.empty() && out.back().first == samples[i])
      out.back().second = p;
    else
      out.emplace_back(samples[i], p);
  }
  return out;
}

void write_rates_csv(std::ostream& out, const std::vector<RateRow>& rows) {
  out << "drop_id,seed,algorithm,mode,threshold_db,edge_snr_db,n_t,num_users,"
         "expected_rate_bps_hz,actual_rate_bps_hz,iterations,restarts_used,wall_ms,csi_coeffs,"
         "precoder_weights,status\n";
  for (const RateRow& r : rows) {
    const bool ok = r.status == "ok";
    out << r.drop_id << ',' << r.seed << ',' << r.algorithm << ',' << r.mode << ','
        << num(r.threshold_db) << ',' << num(r.edge_snr_db) << ',' << r.n_t << ',' << r.num_users
        << ',' << (ok ? num(r.expected_rate) : "") << ',' << (ok ? num(r.actual_rate) : "") << ','
        << r.iterations << ',' << r.restarts_used << ',' << (r.wall_ms >= 0 ? num(r.wall_ms) : "")
        << ',' << r.csi_coeffs << ',' << r.precoder_weights << ',' << r.status << '\n';
  }
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
  out << "drop_id,mode,bb_ub,bb_lb,ssocp_rate,rounds,feasibility_calls\n";
  for (const BoundRow& r : rows)
    out << r.drop_id << ',' << r.mode << ',' << num(r.bb_ub) << ',' << num(r.bb_lb) << ','
        << num(r.ssocp_rate) << ',' << r.rounds << ',' << r.feasibility_calls << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "drop_id,algorithm,restart,iteration,objective\n";
  for (const TraceRow& r : rows)
    out << r.drop_id << ',' << r.algorithm << ',' << r.restart << ',' << r.iteration << ','
        << num(r.objective) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,threshold_db,edge_snr_db,samples,mean_expected_rate_bps_hz,"
         "mean_actual_rate_bps_hz,mean_csi_coeffs,mean_precoder_weights\n";
  for (const SummaryRow& r : rows)
    out << r.algorithm << ',' << num(r.threshold_db) << ',' << num(r.edge_snr_db) << ','
        << r.samples << ',' << num(r.mean_expected) << ',' << num(r.mean_actual) << ','
        << num(r.mean_csi_coeffs) << ',' << num(r.mean_precoder_weights) << '\n';
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfRow>& rows) {
  out << "algorithm,threshold_db,edge_snr_db,actual_rate_bps_hz,probability\n";
  for (const CdfRow& r : rows)
    out << r.algorithm << ',' << num(r.threshold_db) << ',' << num(r.edge_snr_db) << ','
        << num(r.value) << ',' << num(r.probability) << '\n';
}

std::vector<std::string> write_tables(const std::string& dir, const ExperimentTables& tables) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const std::string& name : tables.outputs) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    if (name == "rates.csv")
      write_rates_csv(out, tables.rates);
    else if (name == "bounds.csv")
      write_bounds_csv(out, tables.bounds);
    else if (name == "trace.csv")
      write_trace_csv(out, tables.traces);
    else if (name == "summary.csv")
      write_summary_csv(out, tables.summary);
    else if (name == "cdf.csv")
      write_cdf_csv(out, tables.cdf);
    else
      throw std::invalid_argument("unknown table " + name);
    written.push_back(path.string());
  }
  return written;
}

}  // namespace jtprec
