#pragma once

// Hidden shift recovery: given only oracle access to x -> (x + s)^e, find s.
//
// The deterministic pipeline builds an initial candidate set S_0 (one call
// at x = 0 plus root extraction, or n + 1 calls plus the consecutive-power
// system), then repeatedly picks a probe x from a small window that
// minimizes a collision statistic over the candidates, queries it and keeps
// the candidates consistent with the answer. Once at most four candidates
// remain they are resolved by querying x = -t until the oracle returns 0.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftbreak/field.hpp"
#include "shiftbreak/oracle.hpp"
#include "shiftbreak/roots.hpp"

namespace shiftbreak {

enum class Provenance { ZeroCall, SmoothPigeonhole, GlobalScan, Narrowed };

std::string_view provenance_name(Provenance p) noexcept;

struct CandidateSet {
  std::vector<Residue> members;  // sorted, unique
  Provenance provenance = Provenance::ZeroCall;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(Residue t) const;
};

struct ProbePolicy {
  double epsilon = 0.05;
  /// Exclusive upper bound on probe positions; nullopt means p - 1.
  std::optional<std::uint64_t> window_cap;
  std::uint64_t stall_factor = 2;
  /// Each round shrinks S; exponents near p - 1 need about p rounds.
  std::uint64_t max_rounds = 64;

  /// Throws InvalidArgument unless 0 < epsilon < 1/2 and stall_factor >= 2.
  void validate() const;
};

enum class Statistic { PairFiber, CosetPairs };  // r(x) and R(x)

/// One entry per phase of a recovery run.
struct PhaseRecord {
  std::string phase;
  std::uint64_t calls = 0;
  std::uint64_t candidates = 0;
  std::optional<Residue> probe;
};

using Trace = std::vector<PhaseRecord>;

inline constexpr std::size_t kResolutionThreshold = 4;

/// Queries x = 0..e and reads s off the X^(e-1) coefficient of the
/// interpolating polynomial: exactly e + 1 calls.
Residue interpolation_recover(ShiftOracle& oracle, Trace* trace = nullptr);

/// One call at x = 0, S_0 = {t : t^e = A_0}.
CandidateSet initial_candidates_zero_call(ShiftOracle& oracle, const WitnessSet& witnesses);

struct SmoothStart {
  CandidateSet candidates;
  WitnessSet witnesses;
};

/// Witnesses from the small integers 1..floor(p^epsilon), then n + 1 calls.
SmoothStart initial_candidates_smooth(ShiftOracle& oracle, double epsilon);

/// Witness search of initial_candidates_smooth alone, without oracle calls.
WitnessSet smooth_witnesses(const PrimeContext& ctx, const ExponentParams& params,
                            double epsilon);

/// zeta = floor(sqrt p)^-1, the dilation of the second r(x) probe.
Residue probe_dilation(const PrimeContext& ctx);

/// r(x): the largest number of candidates sharing the answer pair
/// ((t + x)^e, (t + zeta x)^e).
std::uint64_t collision_stat_r(const PrimeContext& ctx, const ExponentParams& params,
                               const CandidateSet& s, Residue x);

/// R(x): ordered pairs s1 != s2 with (x + s1) / (x + s2) in G_e.
std::uint64_t collision_stat_R(const PrimeContext& ctx, const ExponentParams& params,
                               const CandidateSet& s, Residue x);

/// Initial probe window for a statistic at the current candidate count.
std::uint64_t initial_window(const PrimeContext& ctx, const ExponentParams& params,
                             std::size_t candidates, Statistic stat, double epsilon);

/// One narrowing round. Returns a strictly smaller set containing s, or
/// throws Stalled once the window reaches the cap without a separating probe.
CandidateSet narrow_candidates(ShiftOracle& oracle, const CandidateSet& s,
                               const ProbePolicy& policy, Statistic stat,
                               std::optional<std::uint64_t> window = std::nullopt,
                               Trace* trace = nullptr);

/// First m in 3..8 meeting p >= (2m floor(e^(1/(2m+1))) + 2m + 2) e.
std::optional<unsigned> intersection_phase_length(std::uint64_t p, std::uint64_t e);

Residue recover_from_candidates(ShiftOracle& oracle, CandidateSet s0, const ProbePolicy& policy,
                                Trace* trace = nullptr);

/// nu = floor(3 ln p / ln(p / e)) + 1.
std::uint64_t randomized_probe_count(std::uint64_t p, std::uint64_t e);

/// Uniform draw from [0, p) by rejection, identical on every platform.
Residue uniform_residue(std::mt19937_64& gen, std::uint64_t p);

Residue recover_randomized(ShiftOracle& oracle, const CandidateSet& s0, std::uint64_t seed,
                           Trace* trace = nullptr);

inline constexpr std::uint64_t kFullScanCap = 10'000'000;

/// m = floor(ln p / (2 ln(p - 1) / ln e)) + 1.
std::uint64_t large_e_call_count(std::uint64_t p, std::uint64_t e);

/// h = floor((p / e) sqrt(p) (ln p)^2).
std::uint64_t large_e_window(std::uint64_t p, std::uint64_t e);

/// Delegates to the zero-call pipeline for e <= p^0.9, else runs the scan.
Residue recover_large_e(ShiftOracle& oracle, const ProbePolicy& policy, Trace* trace = nullptr);

/// The scan branch: m calls at j = 1..m, S_m by exhaustive scan of F_p,
/// narrowing with R(x) over the large window.
Residue recover_large_e_scan(ShiftOracle& oracle, const ProbePolicy& policy,
                             Trace* trace = nullptr);

}  // namespace shiftbreak
