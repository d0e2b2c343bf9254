#pragma once

// Shifted power identity testing: decide s = t from oracle access, with t
// known (the oracle forbids x = -t) or hidden behind a second oracle.

#include <cstdint>
#include <optional>
#include <string_view>

#include "shiftbreak/field.hpp"
#include "shiftbreak/oracle.hpp"

namespace shiftbreak {

enum class HMode { Theoretical, Exact };
enum class Variant { KnownT, UnknownT };
enum class Verdict { Equal, Distinct };

std::string_view verdict_name(Verdict v) noexcept;
std::string_view hmode_name(HMode m) noexcept;

struct HPolicy {
  HMode mode = HMode::Exact;
  double epsilon = 0.05;
  double c0 = 1.0;
  std::optional<std::uint64_t> cap;  // nullopt means p - 1
};

struct IdentityResult {
  Verdict verdict = Verdict::Equal;
  std::uint64_t probes = 0;  // probe points used; unknown t spends two calls per probe
  std::uint64_t h = 0;
};

inline constexpr std::uint64_t kUnknownWindowCap = std::uint64_t{1} << 15;

/// Largest first-disagreement index of (x + s)^e and (x + t)^e over all
/// s != t, scanning x = 0, 1, ... Exhaustive, O(p^2).
std::uint64_t unknown_t_window(const PrimeContext& ctx, const ExponentParams& params);

/// e^(c0 delta) for known t or e^(c0 delta^(1/3)) for unknown t. The
/// natural delta is ln e / ln p.
std::uint64_t small_e_window(std::uint64_t e, double delta, Variant variant, double c0);

/// Throws RangeViolation when e > (p - 1) / 2.
std::uint64_t choose_h(const PrimeContext& ctx, const ExponentParams& params, Variant variant,
                       const HPolicy& policy);

/// Probes x = y^-1 - t for y = 1..h. The oracle must forbid -t.
IdentityResult test_known_t(ShiftOracle& oracle_s, Residue t, const HPolicy& policy);
IdentityResult test_known_t(ShiftOracle& oracle_s, Residue t, std::uint64_t h);

/// Probes both oracles at x = 0..h.
IdentityResult test_unknown_t(ShiftOracle& oracle_s, ShiftOracle& oracle_t,
                              const HPolicy& policy);
IdentityResult test_unknown_t(ShiftOracle& oracle_s, ShiftOracle& oracle_t, std::uint64_t h);

}  // namespace shiftbreak
