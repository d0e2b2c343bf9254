#include "shiftbreak/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shiftbreak/error.hpp"

namespace shiftbreak {
namespace {

void record(Trace* trace, std::string phase, std::uint64_t calls, std::uint64_t candidates,
            std::optional<Residue> probe = std::nullopt) {
  if (trace != nullptr) trace->push_back({std::move(phase), calls, candidates, probe});
}

double log_ratio(std::uint64_t e, std::uint64_t p) {
  return std::log(static_cast<double>(e)) / std::log(static_cast<double>(p));
}

std::uint64_t ceil_pow(double base, double exponent) {
  const double v = std::pow(base, exponent);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v * (1.0 - 1e-12))));
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Smallest possible sum of c(c - 1) when k items fall into d classes.
std::uint64_t balanced_pairs(std::uint64_t k, std::uint64_t d) {
  const std::uint64_t q = k / d, rem = k % d;
  return rem * (q + 1) * q + (d - rem) * q * (q > 0 ? q - 1 : 0);
}

// Smallest possible largest class when k items fall into d * d classes.
std::uint64_t balanced_max(std::uint64_t k, std::uint64_t d) {
  const auto classes = static_cast<unsigned __int128>(d) * d;
  if (k <= classes) return 1;
  return static_cast<std::uint64_t>((k + classes - 1) / classes);
}

std::uint64_t max_run(std::vector<unsigned __int128>& keys) {
  std::sort(keys.begin(), keys.end());
  std::uint64_t best = 0, run = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    run = (i > 0 && keys[i] == keys[i - 1]) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

std::uint64_t pair_fiber(const PrimeContext& ctx, const PowerTable& pw,
                         std::span<const Residue> s, Residue x, Residue zeta_x,
                         std::vector<unsigned __int128>& keys) {
  keys.clear();
  for (Residue t : s) {
    const auto first = static_cast<unsigned __int128>(pw(ctx.add(t, x)));
    keys.push_back(first * ctx.p() + pw(ctx.add(t, zeta_x)));
  }
  return max_run(keys);
}

std::uint64_t coset_pairs(const PrimeContext& ctx, const PowerTable& pw,
                          std::span<const Residue> s, Residue x, std::vector<Residue>& values) {
  values.clear();
  for (Residue t : s) {
    const Residue v = pw(ctx.add(x, t));
    if (v != 0) values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  std::uint64_t total = 0, run = 0;
  for (std::size_t i = 0; i <= values.size(); ++i) {
    if (i < values.size() && i > 0 && values[i] == values[i - 1]) {
      ++run;
      continue;
    }
    total += run * (run > 0 ? run - 1 : 0);
    run = 1;
  }
  return total;
}

std::vector<Residue> keep_consistent(const PrimeContext& ctx, const PowerTable& pw,
                                     std::span<const Residue> s, Residue x, Residue answer) {
  std::vector<Residue> out;
  for (Residue t : s) {
    if (pw(ctx.add(x, t)) == answer) out.push_back(t);
  }
  return out;
}

// Queries x = -t for the remaining candidates until one answers 0.
Residue resolve(ShiftOracle& oracle, const PowerTable& pw, std::vector<Residue> s,
                Trace* trace) {
  const PrimeContext& ctx = oracle.context();
  const std::uint64_t before = oracle.call_count();
  std::size_t next = 0;
  while (s.size() > 1 && next < s.size()) {
    const Residue t = s[next];
    const Residue x = ctx.neg(t);
    if (oracle.is_forbidden(x)) {
      ++next;
      continue;
    }
    const Residue answer = oracle.query(x);
    if (answer == 0) {
      s = {t};
      break;
    }
    s = keep_consistent(ctx, pw, s, x, answer);
    next = 0;
  }
  record(trace, "resolve", oracle.call_count() - before, s.size());
  if (s.size() != 1) {
    if (s.empty()) throw Error(Errc::AlgorithmFailure, "candidate set lost the shift");
    throw Error(Errc::Stalled, "resolution blocked by forbidden inputs");
  }
  return s.front();
}

std::uint64_t resolved_cap(const ProbePolicy& policy, std::uint64_t p) {
  const std::uint64_t cap = policy.window_cap.value_or(p - 1);
  return std::clamp<std::uint64_t>(cap, 1, p - 1);
}

Residue narrow_to_resolution(ShiftOracle& oracle, std::vector<Residue> s,
                             const ProbePolicy& policy, bool pair_phase_allowed,
                             std::optional<std::uint64_t> window, Trace* trace) {
  const PrimeContext& ctx = oracle.context();
  const PowerTable pw(ctx, oracle.e());
  const double small_set = std::pow(static_cast<double>(ctx.p()), 0.05);
  std::uint64_t rounds = 0;
  while (s.size() > kResolutionThreshold) {
    if (rounds == policy.max_rounds) {
      throw Error(Errc::Stalled, "narrowing exceeded max_rounds");
    }
    const bool pair_phase = pair_phase_allowed && static_cast<double>(s.size()) > small_set;
    CandidateSet current{std::move(s), Provenance::Narrowed};
    s = narrow_candidates(oracle, current, policy,
                          pair_phase ? Statistic::PairFiber : Statistic::CosetPairs, window,
                          trace)
            .members;
    ++rounds;
  }
  return resolve(oracle, pw, std::move(s), trace);
}

}  // namespace

std::string_view provenance_name(Provenance p) noexcept {
  switch (p) {
    case Provenance::ZeroCall: return "zero_call";
    case Provenance::SmoothPigeonhole: return "smooth_pigeonhole";
    case Provenance::GlobalScan: return "global_scan";
    case Provenance::Narrowed: return "narrowed";
  }
  return "unknown";
}

bool CandidateSet::contains(Residue t) const {
  return std::binary_search(members.begin(), members.end(), t);
}

void ProbePolicy::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(Errc::InvalidArgument, "epsilon must lie in (0, 1/2)");
  }
  if (stall_factor < 2) throw Error(Errc::InvalidArgument, "stall_factor must be >= 2");
  if (max_rounds == 0) throw Error(Errc::InvalidArgument, "max_rounds must be positive");
  if (window_cap && *window_cap == 0) throw Error(Errc::InvalidArgument, "empty window cap");
}

Residue interpolation_recover(ShiftOracle& oracle, Trace* trace) {
  const PrimeContext& ctx = oracle.context();
  const std::uint64_t e = oracle.e();
  if (e + 1 > ctx.p()) throw Error(Errc::InvalidArgument, "need e + 1 distinct nodes");

  // Nodes 0..e; w_i = prod_{k != i} (i - k) = i! (e - i)! (-1)^(e - i).
  std::vector<Residue> fact(e + 1, 1);
  for (std::uint64_t i = 1; i <= e; ++i) fact[i] = ctx.mul(fact[i - 1], i);
  const Residue node_sum = static_cast<Residue>((static_cast<unsigned __int128>(e) * (e + 1) / 2) %
                                                ctx.p());

  Residue lead = 0, next = 0;
  for (std::uint64_t i = 0; i <= e; ++i) {
    const Residue y = oracle.query(i);
    Residue weight = ctx.inv(ctx.mul(fact[i], fact[e - i]));
    if ((e - i) % 2 == 1) weight = ctx.neg(weight);
    const Residue term = ctx.mul(y, weight);
    lead = ctx.add(lead, term);
    // X^(e-1) coefficient of prod_{k != i} (X - k) is -(node_sum - i).
    next = ctx.sub(next, ctx.mul(term, ctx.sub(node_sum, i)));
  }
  record(trace, "interpolation", e + 1, 1);
  if (lead != 1) throw Error(Errc::AlgorithmFailure, "interpolant is not monic");
  return ctx.mul(next, ctx.inv(e % ctx.p()));
}

CandidateSet initial_candidates_zero_call(ShiftOracle& oracle, const WitnessSet& witnesses) {
  const Residue a0 = oracle.query(0);
  CandidateSet out{{}, Provenance::ZeroCall};
  if (a0 == 0) {
    out.members = {0};
  } else {
    out.members = all_eth_roots(oracle.context(), oracle.params(), a0, witnesses);
  }
  return out;
}

WitnessSet smooth_witnesses(const PrimeContext& ctx, const ExponentParams& params,
                            double epsilon) {
  auto y = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(ctx.p()), epsilon)));
  y = std::clamp<std::uint64_t>(y, 1, ctx.p() - 1);
  std::vector<Witness> entries;
  for (const auto& f : params.e_factors()) {
    Witness w{f.prime, ctx.alpha(f.prime), ctx.alpha(f.prime), std::nullopt};
    for (Residue x = 1; x <= y && w.gamma > 0; ++x) {
      const unsigned gamma = index_valuation(ctx, f.prime, x);
      if (gamma < w.gamma) {
        w.gamma = gamma;
        w.value = x;
      }
    }
    entries.push_back(w);
  }
  return WitnessSet::make(ctx, params, std::move(entries));
}

SmoothStart initial_candidates_smooth(ShiftOracle& oracle, double epsilon) {
  WitnessSet witnesses = smooth_witnesses(oracle.context(), oracle.params(), epsilon);
  std::vector<Residue> answers;
  for (std::uint64_t j = 0; j <= witnesses.modulus(); ++j) answers.push_back(oracle.query(j));
  CandidateSet candidates{
      candidates_from_consecutive_powers(oracle.context(), oracle.params(), witnesses, answers),
      Provenance::SmoothPigeonhole};
  return {std::move(candidates), std::move(witnesses)};
}

Residue probe_dilation(const PrimeContext& ctx) { return ctx.inv(isqrt(ctx.p())); }

std::uint64_t collision_stat_r(const PrimeContext& ctx, const ExponentParams& params,
                               const CandidateSet& s, Residue x) {
  const PowerTable pw(ctx, params.e());
  std::vector<unsigned __int128> keys;
  return pair_fiber(ctx, pw, s.members, x % ctx.p(), ctx.mul(probe_dilation(ctx), x), keys);
}

std::uint64_t collision_stat_R(const PrimeContext& ctx, const ExponentParams& params,
                               const CandidateSet& s, Residue x) {
  const PowerTable pw(ctx, params.e());
  std::vector<Residue> values;
  return coset_pairs(ctx, pw, s.members, x % ctx.p(), values);
}

std::uint64_t initial_window(const PrimeContext& ctx, const ExponentParams& params,
                             std::size_t candidates, Statistic stat, double epsilon) {
  const auto p = static_cast<double>(ctx.p());
  const auto e = static_cast<double>(params.e());
  if (stat == Statistic::CosetPairs) {
    const double rho = log_ratio(params.e(), ctx.p());
    return rho >= 0.65 ? ceil_pow(e, 0.56) : ceil_pow(e, 0.5 + epsilon / 2);
  }
  const double alpha = std::log(static_cast<double>(std::max<std::size_t>(candidates, 1))) /
                       std::log(p);
  const double beta = (3.0 - 2.0 * alpha - std::sqrt(1.0 + 4.0 * alpha * alpha)) / 4.0 + epsilon;
  return ceil_pow(p, beta);
}

CandidateSet narrow_candidates(ShiftOracle& oracle, const CandidateSet& s,
                               const ProbePolicy& policy, Statistic stat,
                               std::optional<std::uint64_t> window, Trace* trace) {
  policy.validate();
  if (s.size() < 2) throw Error(Errc::InvalidArgument, "narrowing needs at least two candidates");
  const PrimeContext& ctx = oracle.context();
  const PowerTable pw(ctx, oracle.e());
  const std::uint64_t n = s.size();
  const std::uint64_t d = oracle.params().d();
  const std::uint64_t cap = resolved_cap(policy, ctx.p());
  const Residue zeta = probe_dilation(ctx);
  const bool pairs = stat == Statistic::PairFiber;

  // The statistic value that would leave S unsplit, and the value no probe
  // can beat (reaching it ends the scan early).
  const std::uint64_t unsplit = pairs ? n : n * (n - 1);
  const std::uint64_t floor_value = pairs ? balanced_max(n > 2 ? n - 2 : 1, d)
                                          : balanced_pairs(n - 1, d);

  std::uint64_t h = window.value_or(initial_window(ctx, oracle.params(), n, stat, policy.epsilon));
  h = std::clamp<std::uint64_t>(h, 1, cap);
  std::uint64_t scanned = 0;
  std::optional<Residue> best_x;
  std::uint64_t best = unsplit;
  std::vector<unsigned __int128> keys;
  std::vector<Residue> values;

  for (;;) {
    for (std::uint64_t i = scanned; i < h && best > floor_value; ++i) {
      // Pair probes use x in [1, h] so the two probe points differ.
      const Residue x = pairs ? i + 1 : i;
      const Residue zx = ctx.mul(zeta, x);
      if (oracle.is_forbidden(x) || (pairs && oracle.is_forbidden(zx))) continue;
      const std::uint64_t value = pairs ? pair_fiber(ctx, pw, s.members, x, zx, keys)
                                        : coset_pairs(ctx, pw, s.members, x, values);
      if (value < best) {
        best = value;
        best_x = x;
      }
    }
    if (best_x) break;
    if (h == cap) throw Error(Errc::Stalled, "no separating probe below the window cap");
    scanned = h;
    h = std::min(cap, h * policy.stall_factor);
  }

  const Residue x = *best_x;
  const std::uint64_t before = oracle.call_count();
  std::vector<Residue> kept = keep_consistent(ctx, pw, s.members, x, oracle.query(x));
  if (pairs) {
    const Residue zx = ctx.mul(zeta, x);
    kept = keep_consistent(ctx, pw, kept, zx, oracle.query(zx));
  }
  if (kept.empty()) throw Error(Errc::AlgorithmFailure, "candidate set lost the shift");
  record(trace, pairs ? "narrow-r" : "narrow-R", oracle.call_count() - before, kept.size(), x);
  return {std::move(kept), Provenance::Narrowed};
}

std::optional<unsigned> intersection_phase_length(std::uint64_t p, std::uint64_t e) {
  for (unsigned m = 3; m <= 8; ++m) {
    const auto root = static_cast<std::uint64_t>(
        std::floor(std::pow(static_cast<double>(e), 1.0 / (2.0 * m + 1.0))));
    const unsigned __int128 need =
        static_cast<unsigned __int128>(2 * m * root + 2 * m + 2) * e;
    if (need <= p) return m;
  }
  return std::nullopt;
}

Residue recover_from_candidates(ShiftOracle& oracle, CandidateSet s0, const ProbePolicy& policy,
                                Trace* trace) {
  policy.validate();
  if (s0.members.empty()) throw Error(Errc::InvalidArgument, "empty candidate set");
  const PrimeContext& ctx = oracle.context();
  const std::uint64_t e = oracle.e();
  std::vector<Residue> s = std::move(s0.members);
  const bool large = e > 1 && log_ratio(e, ctx.p()) >= 0.65;

  if (large && s.size() > kResolutionThreshold) {
    if (auto m = intersection_phase_length(ctx.p(), e)) {
      const PowerTable pw(ctx, e);
      const std::uint64_t before = oracle.call_count();
      for (std::uint64_t j = 1; j <= *m && j < ctx.p(); ++j) {
        if (oracle.is_forbidden(j)) continue;
        s = keep_consistent(ctx, pw, s, j, oracle.query(j));
      }
      record(trace, "intersection", oracle.call_count() - before, s.size());
    }
  }
  return narrow_to_resolution(oracle, std::move(s), policy, large, std::nullopt, trace);
}

std::uint64_t randomized_probe_count(std::uint64_t p, std::uint64_t e) {
  const double lp = std::log(static_cast<double>(p));
  const double gap = std::log(static_cast<double>(p) / static_cast<double>(e));
  return static_cast<std::uint64_t>(std::floor(3.0 * lp / gap)) + 1;
}

Residue uniform_residue(std::mt19937_64& gen, std::uint64_t p) {
  const std::uint64_t limit = gen.max() - gen.max() % p;
  for (;;) {
    const std::uint64_t v = gen();
    if (v < limit) return v % p;
  }
}

Residue recover_randomized(ShiftOracle& oracle, const CandidateSet& s0, std::uint64_t seed,
                           Trace* trace) {
  if (s0.members.empty()) throw Error(Errc::InvalidArgument, "empty candidate set");
  const PrimeContext& ctx = oracle.context();
  const PowerTable pw(ctx, oracle.e());
  const std::uint64_t nu = randomized_probe_count(ctx.p(), oracle.e());

  std::mt19937_64 gen(seed);

  const std::uint64_t before = oracle.call_count();
  std::vector<std::pair<Residue, Residue>> probes;
  probes.reserve(nu);
  while (probes.size() < nu) {
    const Residue x = uniform_residue(gen, ctx.p());
    if (oracle.is_forbidden(x)) continue;
    probes.emplace_back(x, oracle.query(x));
  }

  std::vector<Residue> s;
  for (Residue t : s0.members) {
    const bool consistent = std::all_of(probes.begin(), probes.end(), [&](const auto& probe) {
      return pw(ctx.add(probe.first, t)) == probe.second;
    });
    if (consistent) s.push_back(t);
  }
  record(trace, "random-probes", oracle.call_count() - before, s.size());
  if (s.empty()) throw Error(Errc::AlgorithmFailure, "candidate set lost the shift");
  return resolve(oracle, pw, std::move(s), trace);
}

std::uint64_t large_e_call_count(std::uint64_t p, std::uint64_t e) {
  const double lp = std::log(static_cast<double>(p));
  const double le = std::log(static_cast<double>(e));
  const double lq = std::log(static_cast<double>(p - 1));
  return static_cast<std::uint64_t>(std::floor(lp / (2.0 * lq / le))) + 1;
}

std::uint64_t large_e_window(std::uint64_t p, std::uint64_t e) {
  const auto pd = static_cast<double>(p);
  const double lp = std::log(pd);
  return static_cast<std::uint64_t>(
      std::floor(pd / static_cast<double>(e) * std::sqrt(pd) * lp * lp));
}

Residue recover_large_e(ShiftOracle& oracle, const ProbePolicy& policy, Trace* trace) {
  const PrimeContext& ctx = oracle.context();
  if (oracle.e() == 1 || log_ratio(oracle.e(), ctx.p()) <= 0.9) {
    const WitnessSet witnesses = WitnessSet::nonresidues(ctx, oracle.params());
    CandidateSet s0 = initial_candidates_zero_call(oracle, witnesses);
    record(trace, "zero-call", 1, s0.size());
    return recover_from_candidates(oracle, std::move(s0), policy, trace);
  }
  return recover_large_e_scan(oracle, policy, trace);
}

Residue recover_large_e_scan(ShiftOracle& oracle, const ProbePolicy& policy, Trace* trace) {
  policy.validate();
  const PrimeContext& ctx = oracle.context();
  if (ctx.p() > kFullScanCap) throw Error(Errc::TooLargeForScan, "p above the full-scan cap");
  const std::uint64_t e = oracle.e();
  const std::uint64_t m = std::min(large_e_call_count(ctx.p(), e), ctx.p() - 1);
  const PowerTable pw(ctx, e);

  const std::uint64_t before = oracle.call_count();
  std::vector<std::pair<Residue, Residue>> answers;
  for (Residue j = 1; j <= m; ++j) {
    if (oracle.is_forbidden(j)) continue;
    const Residue a = oracle.query(j);
    if (a == 0) {
      record(trace, "large-e-calls", oracle.call_count() - before, 1);
      return ctx.neg(j);
    }
    answers.emplace_back(j, a);
  }
  std::vector<Residue> s;
  for (Residue x = 0; x < ctx.p(); ++x) {
    const bool consistent = std::all_of(answers.begin(), answers.end(), [&](const auto& a) {
      return pw(ctx.add(x, a.first)) == a.second;
    });
    if (consistent) s.push_back(x);
  }
  record(trace, "large-e-calls", oracle.call_count() - before, s.size());
  const std::uint64_t h = std::max<std::uint64_t>(1, large_e_window(ctx.p(), e));
  return narrow_to_resolution(oracle, std::move(s), policy, false, h, trace);
}

}  // namespace shiftbreak
