#include "shiftbreak/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "shiftbreak/error.hpp"
#include "shiftbreak/lab.hpp"

namespace shiftbreak {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

// Runs f(0..n-1) on a worker pool. If several calls throw, the one with the
// lowest index is rethrown so failures do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

Residue parse_residue(const std::string& text, std::uint64_t p, std::mt19937_64& gen,
                      const char* name) {
  if (text == "random") return uniform_residue(gen, p);
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    config_error(std::string(name) + " must be an integer or \"random\"");
  }
  if (used != text.size() || text.front() == '-') {
    config_error(std::string(name) + " must be an integer or \"random\"");
  }
  if (value >= p) config_error(std::string(name) + " must lie in [0, p)");
  return value;
}

std::pair<PrimeContext, ExponentParams> field_for(std::uint64_t p, std::uint64_t e) {
  try {
    PrimeContext ctx = make_context(p);
    ExponentParams params = make_exponent(ctx, e);
    return {std::move(ctx), std::move(params)};
  } catch (const Error& err) {
    config_error(err.what());
  }
}

ProbePolicy probe_policy(const ExperimentConfig& config) {
  ProbePolicy policy;
  policy.epsilon = config.epsilon;
  policy.window_cap = config.window_cap;
  if (config.max_rounds) policy.max_rounds = *config.max_rounds;
  return policy;
}

Residue recover_with(ShiftOracle& oracle, const std::string& algorithm, const ProbePolicy& policy,
                     std::uint64_t seed, Trace* trace) {
  const PrimeContext& ctx = oracle.context();
  if (algorithm == "interpolation") return interpolation_recover(oracle, trace);
  if (algorithm == "smooth+narrow") {
    SmoothStart start = initial_candidates_smooth(oracle, policy.epsilon);
    if (trace) trace->push_back({"smooth", oracle.call_count(), start.candidates.size(), {}});
    return recover_from_candidates(oracle, std::move(start.candidates), policy, trace);
  }
  if (algorithm == "large_e") return recover_large_e(oracle, policy, trace);
  CandidateSet s0 =
      initial_candidates_zero_call(oracle, WitnessSet::nonresidues(ctx, oracle.params()));
  if (trace) trace->push_back({"zero-call", 1, s0.size(), {}});
  if (algorithm == "randomized") return recover_randomized(oracle, s0, seed, trace);
  return recover_from_candidates(oracle, std::move(s0), policy, trace);
}

std::uint64_t need_uint(const Json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number_integer() || params[key].get<long long>() < 0) {
    config_error(std::string("grid point needs a nonnegative integer \"") + key + "\"");
  }
  return params[key].get<std::uint64_t>();
}

double need_double(const Json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number()) {
    config_error(std::string("grid point needs a number \"") + key + "\"");
  }
  return params[key].get<double>();
}

double ratio_of(double count, double predicted) { return predicted > 0 ? count / predicted : 0.0; }

std::string render_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> column_union(const std::vector<Json>& rows) {
  std::vector<std::string> columns;
  for (const auto& row : rows) {
    for (const auto& item : row.items()) {
      if (std::find(columns.begin(), columns.end(), item.key()) == columns.end()) {
        columns.push_back(item.key());
      }
    }
  }
  return columns;
}

std::vector<Json> nu_e_grid(std::uint64_t p_max) {
  std::vector<Json> grid;
  for (std::uint64_t p = 3; p <= p_max; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint64_t e : divisors(p - 1)) grid.push_back(Json{{"p", p}, {"e", e}});
  }
  return grid;
}

}  // namespace

void ExperimentConfig::validate() const {
  const bool needs_field = command == Command::Recover || command == Command::Identity ||
                           (command == Command::Bench && grid.empty());
  if (needs_field) {
    if (p < 3) config_error("--p is required (an odd prime)");
    if (command != Command::Bench || e != 0) {
      if (e == 0) config_error("--e is required");
      field_for(p, e);
    } else {
      field_for(p, 1);
    }
  }
  if (!(epsilon > 0.0 && epsilon < 0.5)) config_error("--epsilon must lie in (0, 1/2)");
  if (!(c0 > 0.0)) config_error("--c0 must be positive");
  if (delta && !(*delta > 0.0)) config_error("--delta must be positive");
  if (window_cap && *window_cap == 0) config_error("--window-cap must be positive");
  if (max_rounds && *max_rounds == 0) config_error("--max-rounds must be positive");
  if (trials == 0) config_error("--trials must be at least 1");

  const auto known = [](const std::string& a) {
    return std::find(kAlgorithms.begin(), kAlgorithms.end(), a) != kAlgorithms.end();
  };
  switch (command) {
    case Command::Recover:
      if (!known(algorithm)) config_error("unknown --algorithm " + algorithm);
      if (!seed && (s == "random" || algorithm == "randomized")) {
        config_error("--seed is required for random secrets and randomized recovery");
      }
      break;
    case Command::Identity:
      if (t.empty()) config_error("identity needs --t");
      if (variant != "known_t" && variant != "unknown_t") {
        config_error("--variant must be known_t or unknown_t");
      }
      if (!seed && (s == "random" || t == "random")) {
        config_error("--seed is required for random secrets");
      }
      break;
    case Command::Lab:
      if (std::find(lab_lemmas().begin(), lab_lemmas().end(), lemma) == lab_lemmas().end()) {
        config_error("unknown --lemma " + lemma);
      }
      break;
    case Command::Bench:
      if (algorithm != "all" && !known(algorithm)) config_error("unknown --algorithm " + algorithm);
      if (!seed) config_error("bench draws random secrets and needs --seed");
      break;
  }
}

Json RecoveryReport::to_json() const {
  Json phase_list = Json::array();
  for (const auto& ph : phases) {
    Json entry{{"phase", ph.phase}, {"calls", ph.calls}, {"candidates", ph.candidates}};
    if (ph.probe) entry["probe"] = *ph.probe;
    phase_list.push_back(std::move(entry));
  }
  Json out{{"command", "recover"}, {"algorithm", algorithm}, {"p", p},
           {"e", e},               {"s", planted},           {"recovered", recovered},
           {"oracle_calls", oracle_calls}};
  if (seed) out["seed"] = *seed;
  out["phases"] = std::move(phase_list);
  if (wall_time_ms) out["wall_time_ms"] = *wall_time_ms;
  return out;
}

Json IdentityReport::to_json() const {
  return Json{{"command", "identity"},
              {"variant", variant == Variant::KnownT ? "known_t" : "unknown_t"},
              {"p", p},
              {"e", e},
              {"s", s},
              {"t", t},
              {"verdict", verdict_name(result.verdict)},
              {"probes", result.probes},
              {"oracle_calls", oracle_calls},
              {"h", result.h},
              {"h_mode", hmode_name(mode)},
              {"h_small_e", h_small_e},
              {"agrees_with_truth", agrees_with_truth}};
}

std::vector<Json> LabReport::to_rows() const {
  std::vector<Json> out;
  for (const auto& row : rows) {
    Json j{{"lemma_id", lemma_id}};
    for (const auto& item : row.params.items()) j[item.key()] = item.value();
    j["exact_count"] = row.exact;
    j["predicted"] = row.predicted;
    j["ratio"] = row.ratio;
    for (const auto& item : row.extra.items()) j[item.key()] = item.value();
    j["status"] = row.status;
    out.push_back(std::move(j));
  }
  if (!rows.empty()) {
    out.push_back(Json{{"lemma_id", lemma_id},
                       {"status", "summary"},
                       {"rows", rows.size()},
                       {"max_ratio", max_ratio},
                       {"mean_ratio", mean_ratio}});
  }
  return out;
}

const std::vector<std::string>& lab_lemmas() {
  static const std::vector<std::string> ids = {
      "N(e)",    "hyperbola",         "energy",           "shift_intersection",
      "J",       "product_set",       "partition",        "char_sum_fraction",
      "char_sum_interval", "weil1",   "psi",              "smooth_subgroup"};
  return ids;
}

RecoveryReport run_recover(const ExperimentConfig& config) {
  config.validate();
  auto [ctx, params] = field_for(config.p, config.e);
  std::mt19937_64 gen(config.seed.value_or(0));
  const Residue s = parse_residue(config.s, config.p, gen, "--s");

  ShiftOracle oracle = new_oracle(ctx, params, s);
  RecoveryReport report;
  report.algorithm = config.algorithm;
  report.p = config.p;
  report.e = config.e;
  report.planted = s;
  report.seed = config.seed;
  const auto start = Clock::now();
  report.recovered = recover_with(oracle, config.algorithm, probe_policy(config),
                                  config.seed.value_or(0), &report.phases);
  if (config.timing) report.wall_time_ms = elapsed_ms(start);
  report.oracle_calls = oracle.call_count();
  if (report.recovered != s) {
    throw Error(Errc::AlgorithmFailure, "recovered shift differs from the planted one");
  }
  return report;
}

IdentityReport run_identity(const ExperimentConfig& config) {
  config.validate();
  auto [ctx, params] = field_for(config.p, config.e);
  std::mt19937_64 gen(config.seed.value_or(0));
  IdentityReport report;
  report.p = config.p;
  report.e = config.e;
  report.s = parse_residue(config.s, config.p, gen, "--s");
  report.t = parse_residue(config.t, config.p, gen, "--t");
  report.mode = config.mode;
  report.variant = config.variant == "unknown_t" ? Variant::UnknownT : Variant::KnownT;

  HPolicy policy{config.mode, config.epsilon, config.c0, config.window_cap};
  if (report.variant == Variant::KnownT) {
    ShiftOracle oracle = new_oracle(ctx, params, report.s, {ctx.neg(report.t)});
    report.result = test_known_t(oracle, report.t, policy);
    report.oracle_calls = oracle.call_count();
  } else {
    ShiftOracle oracle_s = new_oracle(ctx, params, report.s);
    ShiftOracle oracle_t = new_oracle(ctx, params, report.t);
    report.result = test_unknown_t(oracle_s, oracle_t, policy);
    report.oracle_calls = oracle_s.call_count() + oracle_t.call_count();
  }
  const double delta = config.delta.value_or(std::log(static_cast<double>(config.e)) /
                                             std::log(static_cast<double>(config.p)));
  report.h_small_e = small_e_window(config.e, delta, report.variant, config.c0);
  report.agrees_with_truth = (report.result.verdict == Verdict::Equal) == (report.s == report.t);
  return report;
}

LabRow evaluate_lab_point(const std::string& lemma, const Json& params) {
  LabRow row;
  row.params = params;
  auto finish = [&](double count, double predicted) {
    row.predicted = predicted;
    row.ratio = ratio_of(count, predicted);
  };

  if (lemma == "N(e)") {
    auto [ctx, ep] = field_for(need_uint(params, "p"), need_uint(params, "e"));
    const std::uint64_t n = longest_coset_run(ctx, ep);
    const auto e = static_cast<double>(ep.e());
    row.exact = n;
    finish(static_cast<double>(n), std::sqrt(e));
    if (ep.e() >= 2) {
      const double le = std::log(e);
      row.extra["c0_min"] = std::log(static_cast<double>(n + 1)) *
                            std::log(static_cast<double>(ctx.p())) / (le * le);
    } else {
      row.extra["c0_min"] = nullptr;
    }
    row.extra["below_e"] = n < ep.e();
  } else if (lemma == "hyperbola") {
    const std::uint64_t p = need_uint(params, "p"), H = need_uint(params, "H");
    const std::uint64_t n = hyperbola_count(p, need_uint(params, "u"), need_uint(params, "v"), H);
    row.exact = n;
    const auto hd = static_cast<double>(H);
    finish(static_cast<double>(n), std::pow(hd, 1.5) / std::sqrt(static_cast<double>(p)) + 1.0);
  } else if (lemma == "energy") {
    const std::uint64_t p = need_uint(params, "p"), H = need_uint(params, "H");
    const std::uint64_t n = multiplicative_energy_count(p, need_uint(params, "a"), H);
    row.exact = n;
    const auto hd = static_cast<double>(H);
    finish(static_cast<double>(n), std::pow(hd, 4) / static_cast<double>(p) + hd * hd);
  } else if (lemma == "shift_intersection") {
    auto [ctx, ep] = field_for(need_uint(params, "p"), need_uint(params, "e"));
    if (!params.contains("shifts") || !params["shifts"].is_array()) {
      config_error("grid point needs \"shifts\": [[lambda, mu], ...]");
    }
    std::vector<Shift> shifts;
    for (const auto& pair : params["shifts"]) {
      if (!pair.is_array() || pair.size() != 2) config_error("each shift is [lambda, mu]");
      shifts.push_back({pair[0].get<Residue>(), pair[1].get<Residue>()});
    }
    const std::uint64_t n = subgroup_shift_intersection(ctx, ep, shifts);
    const double m = static_cast<double>(shifts.size());
    row.exact = n;
    finish(static_cast<double>(n),
           std::pow(static_cast<double>(ep.e()), (m + 1.0) / (2.0 * m + 1.0)));
  } else if (lemma == "J") {
    PrimeContext ctx = field_for(need_uint(params, "p"), 1).first;
    const std::uint64_t h = need_uint(params, "h");
    const std::uint64_t n =
        product_count_J(ctx, static_cast<unsigned>(need_uint(params, "nu")),
                        need_uint(params, "lambda"), need_uint(params, "s"), h);
    row.exact = n;
    const double lh = std::log(static_cast<double>(h));
    finish(static_cast<double>(n), h >= 3 ? std::exp(lh / std::log(lh)) : 1.0);
  } else if (lemma == "product_set") {
    PrimeContext ctx = field_for(need_uint(params, "p"), 1).first;
    const std::uint64_t h = need_uint(params, "h");
    const auto nu = static_cast<unsigned>(need_uint(params, "nu"));
    std::optional<Residue> t;
    if (params.contains("t") && !params["t"].is_null()) t = need_uint(params, "t");
    const std::uint64_t n = product_set_size(ctx, nu, need_uint(params, "s"), t, h);
    row.exact = n;
    row.extra["kind"] = t ? "fractional" : "linear";
    finish(static_cast<double>(n), std::pow(static_cast<double>(h), nu));
  } else if (lemma == "partition") {
    const std::uint64_t p = need_uint(params, "p");
    const double kappa = need_double(params, "kappa");
    std::vector<Residue> set;
    if (params.contains("S")) {
      set = params["S"].get<std::vector<Residue>>();
    } else {
      const std::uint64_t size = need_uint(params, "size");
      if (size >= p) config_error("partition size must be below p");
      std::mt19937_64 gen(need_uint(params, "seed"));
      std::vector<bool> taken(p, false);
      while (set.size() < size) {
        const Residue x = uniform_residue(gen, p);
        if (!taken[x]) {
          taken[x] = true;
          set.push_back(x);
        }
      }
    }
    const SpacedPartition part = spaced_partition(p, set, kappa);
    const auto n = static_cast<double>(set.size());
    row.exact = part.leftover.size();
    row.extra["K"] = part.d_sets.size();
    row.extra["L"] = part.e_sets.size();
    row.extra["properties_hold"] = spaced_partition_valid(p, set, kappa, part);
    finish(static_cast<double>(part.leftover.size()),
           2.0 * std::pow(static_cast<double>(p), -kappa) * n);
  } else if (lemma == "char_sum_fraction" || lemma == "char_sum_interval" || lemma == "weil1") {
    auto [ctx, ep] = field_for(need_uint(params, "p"), need_uint(params, "e"));
    const IndexTable table = build_index_table(ctx);
    const std::uint64_t j = need_uint(params, "j");
    const double sp = std::sqrt(static_cast<double>(ctx.p()));
    const double lp = std::log(static_cast<double>(ctx.p()));
    std::complex<double> value;
    double predicted = 0;
    if (lemma == "char_sum_fraction") {
      value = char_sum_fraction(ctx, table, ep, j, need_uint(params, "s"), need_uint(params, "t"),
                                need_uint(params, "h"));
      predicted = 4.0 * sp * lp;
    } else if (lemma == "char_sum_interval") {
      value = char_sum_interval(table, ep, j, need_uint(params, "h"));
      predicted = sp * lp;
    } else {
      const std::uint64_t f = need_uint(params, "f");
      value = char_sum_shifted_power(ctx, table, ep, j, f, need_uint(params, "a"));
      predicted = static_cast<double>(f) * sp;
    }
    row.exact = std::abs(value);
    row.extra["re"] = value.real();
    row.extra["im"] = value.imag();
    finish(std::abs(value), predicted);
  } else if (lemma == "psi") {
    const std::uint64_t x = need_uint(params, "x"), y = need_uint(params, "y");
    const std::uint64_t n = psi_count(x, y);
    row.exact = n;
    double predicted = static_cast<double>(x);
    if (y >= 2 && x >= 2) {
      const double u = std::log(static_cast<double>(x)) / std::log(static_cast<double>(y));
      predicted = static_cast<double>(x) * std::pow(u, -u);
    }
    finish(static_cast<double>(n), predicted);
  } else if (lemma == "smooth_subgroup") {
    PrimeContext ctx = field_for(need_uint(params, "p"), 1).first;
    const std::uint64_t y = need_uint(params, "y");
    const std::uint64_t order = smooth_subgroup_order(ctx, build_index_table(ctx), y);
    const std::uint64_t psi = psi_count(ctx.p() - 1, y);
    row.exact = order;
    finish(static_cast<double>(order), static_cast<double>(psi));
  } else {
    config_error("unknown lemma " + lemma);
  }
  return row;
}

LabReport run_lab(const ExperimentConfig& config) {
  config.validate();
  std::vector<Json> grid = config.grid;
  if (grid.empty() && config.lemma == "N(e)") {
    if (config.p_max) {
      grid = nu_e_grid(*config.p_max);
    } else if (config.p != 0) {
      const auto [ctx, unit] = field_for(config.p, 1);
      if (config.e != 0) {
        grid.push_back(Json{{"p", config.p}, {"e", config.e}});
      } else {
        for (std::uint64_t e : divisors(config.p - 1)) grid.push_back(Json{{"p", config.p}, {"e", e}});
      }
    }
  }

  LabReport report;
  report.lemma_id = config.lemma;
  report.rows.resize(grid.size());
  parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    try {
      report.rows[i] = evaluate_lab_point(config.lemma, grid[i]);
    } catch (const Error& err) {
      if (err.code() != Errc::TooLarge) throw;
      report.rows[i].params = grid[i];
      report.rows[i].status = "skipped";
    }
  });

  double total = 0;
  std::size_t counted = 0;
  for (const auto& row : report.rows) {
    if (row.status != "ok" || row.predicted <= 0) continue;
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    total += row.ratio;
    ++counted;
  }
  report.mean_ratio = counted ? total / static_cast<double>(counted) : 0.0;
  return report;
}

std::vector<Json> run_bench(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  if (!config.grid.empty()) {
    for (const auto& point : config.grid) cells.emplace_back(need_uint(point, "p"), need_uint(point, "e"));
  } else if (config.e != 0) {
    cells.emplace_back(config.p, config.e);
  } else {
    for (std::uint64_t e : divisors(config.p - 1)) {
      if (e >= 2) cells.emplace_back(config.p, e);
    }
  }
  const std::vector<std::string> algorithms =
      config.algorithm == "all" ? kAlgorithms : std::vector<std::string>{config.algorithm};
  const ProbePolicy policy = probe_policy(config);

  std::vector<std::vector<Json>> per_cell(cells.size());
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    const auto [p, e] = cells[i];
    auto [ctx, params] = field_for(p, e);
    std::seed_seq seq{*config.seed, p, e};
    std::mt19937_64 gen(seq);
    std::vector<Residue> secrets;
    for (std::uint64_t k = 0; k < config.trials; ++k) secrets.push_back(uniform_residue(gen, p));

    for (const auto& algorithm : algorithms) {
      Json row{{"p", p}, {"e", e}, {"algorithm", algorithm}, {"trials", config.trials}};
      std::uint64_t total = 0, worst = 0;
      double wall = 0;
      std::string status = "ok";
      for (std::uint64_t k = 0; k < config.trials; ++k) {
        ShiftOracle oracle = new_oracle(ctx, params, secrets[k]);
        const auto start = Clock::now();
        Residue got = 0;
        try {
          got = recover_with(oracle, algorithm, policy, *config.seed + k, nullptr);
        } catch (const Error& err) {
          if (err.code() == Errc::AlgorithmFailure) throw;
          status = std::string(errc_name(err.code()));
          break;
        }
        wall += elapsed_ms(start);
        if (got != secrets[k]) {
          throw Error(Errc::AlgorithmFailure, "recovered shift differs from the planted one");
        }
        total += oracle.call_count();
        worst = std::max(worst, oracle.call_count());
      }
      if (status == "ok") {
        row["mean_calls"] = static_cast<double>(total) / static_cast<double>(config.trials);
        row["max_calls"] = worst;
      } else {
        row["mean_calls"] = nullptr;
        row["max_calls"] = nullptr;
      }
      row["interpolation_calls"] = e + 1;
      if (algorithm == "large_e") row["m"] = large_e_call_count(p, e);
      if (config.timing && status == "ok") {
        row["mean_wall_ms"] = wall / static_cast<double>(config.trials);
      }
      row["status"] = status;
      per_cell[i].push_back(std::move(row));
    }
  });

  std::vector<Json> rows;
  for (auto& cell : per_cell) {
    for (auto& row : cell) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Json> run_command(const ExperimentConfig& config) {
  std::vector<Json> rows;
  switch (config.command) {
    case Command::Recover:
      for (std::uint64_t k = 0; k < config.trials; ++k) {
        ExperimentConfig trial = config;
        if (trial.seed) *trial.seed += k;
        rows.push_back(run_recover(trial).to_json());
      }
      break;
    case Command::Identity:
      for (std::uint64_t k = 0; k < config.trials; ++k) {
        ExperimentConfig trial = config;
        if (trial.seed) *trial.seed += k;
        rows.push_back(run_identity(trial).to_json());
      }
      break;
    case Command::Lab:
      rows = run_lab(config).to_rows();
      break;
    case Command::Bench:
      rows = run_bench(config);
      break;
  }
  return rows;
}

void emit_rows(std::ostream& out, OutputFormat format, const std::vector<Json>& rows) {
  if (format == OutputFormat::Json) {
    for (const auto& row : rows) out << row.dump() << '\n';
    return;
  }
  if (rows.empty()) return;
  const std::vector<std::string> columns = column_union(rows);
  std::vector<std::vector<std::string>> cells;
  cells.push_back(columns);
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (const auto& col : columns) line.push_back(row.contains(col) ? render_cell(row[col]) : "");
    cells.push_back(std::move(line));
  }
  if (format == OutputFormat::Csv) {
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        out << (i ? "," : "") << csv_escape(line[i]);
      }
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(columns.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[r][i];
    }
    out << '\n';
    if (r == 0) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "  " : "") << std::string(width[i], '-');
      }
      out << '\n';
    }
  }
}

std::vector<Json> load_grid(const std::string& source) {
  Json doc;
  try {
    const auto first = source.find_first_not_of(" \t\n");
    if (first != std::string::npos && (source[first] == '[' || source[first] == '{')) {
      doc = Json::parse(source);
    } else {
      std::ifstream in(source);
      if (!in) config_error("cannot open grid file " + source);
      doc = Json::parse(in);
    }
  } catch (const Json::exception& err) {
    config_error(std::string("grid is not valid JSON: ") + err.what());
  }
  if (!doc.is_array()) config_error("grid must be a JSON array of parameter objects");
  std::vector<Json> grid;
  for (auto& point : doc) {
    if (!point.is_object()) config_error("grid entries must be objects");
    grid.push_back(std::move(point));
  }
  return grid;
}

}  // namespace shiftbreak
