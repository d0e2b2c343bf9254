#include "shiftbreak/identity.hpp"

#include <algorithm>
#include <cmath>

#include "shiftbreak/error.hpp"
#include "shiftbreak/lab.hpp"

namespace shiftbreak {
namespace {

std::uint64_t ceil_positive(double v) {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v * (1.0 - 1e-12))));
}

}  // namespace

std::string_view verdict_name(Verdict v) noexcept {
  return v == Verdict::Equal ? "equal" : "distinct";
}

std::string_view hmode_name(HMode m) noexcept {
  return m == HMode::Exact ? "exact" : "theoretical";
}

std::uint64_t unknown_t_window(const PrimeContext& ctx, const ExponentParams& params) {
  const std::uint64_t p = ctx.p();
  if (p > kUnknownWindowCap) throw Error(Errc::TooLarge, "p above the exhaustive window cap");
  const PowerTable pw(ctx, params.e());
  std::vector<Residue> values(p);
  for (Residue v = 0; v < p; ++v) values[v] = pw(v);

  // For a difference delta the answers agree on runs of v = x + s; v = 0
  // never agrees, so no run wraps. delta and -delta give mirrored runs.
  std::uint64_t worst = 0;
  for (std::uint64_t delta = 1; delta <= (p - 1) / 2; ++delta) {
    std::uint64_t run = 0;
    for (Residue v = 1; v < p; ++v) {
      const Residue w = v + delta < p ? v + delta : v + delta - p;
      run = values[v] == values[w] ? run + 1 : 0;
      worst = std::max(worst, run);
    }
  }
  return worst;
}

std::uint64_t small_e_window(std::uint64_t e, double delta, Variant variant, double c0) {
  if (e <= 1) return 1;
  const double le = std::log(static_cast<double>(e));
  const double power = variant == Variant::KnownT ? delta : std::cbrt(delta);
  return ceil_positive(std::exp(c0 * power * le));
}

std::uint64_t choose_h(const PrimeContext& ctx, const ExponentParams& params, Variant variant,
                       const HPolicy& policy) {
  const std::uint64_t p = ctx.p(), e = params.e();
  if (e > (p - 1) / 2) throw Error(Errc::RangeViolation, "e must not exceed (p - 1) / 2");
  if (!(policy.epsilon > 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  const std::uint64_t cap = policy.cap.value_or(p - 1);
  if (cap == 0 || cap > p - 1) throw Error(Errc::InvalidArgument, "cap must lie in [1, p - 1]");

  std::uint64_t h = 0;
  if (policy.mode == HMode::Exact) {
    h = variant == Variant::KnownT ? longest_coset_run(ctx, params) + 1
                                   : unknown_t_window(ctx, params);
  } else {
    const auto pd = static_cast<double>(p), ed = static_cast<double>(e);
    const double eps = policy.epsilon;
    if (variant == Variant::KnownT) {
      h = ceil_positive(std::min(std::pow(ed, 0.25 + eps), std::pow(pd, 0.25 + eps)));
    } else {
      const double lp = std::log(pd);
      const double schedule =
          std::max(std::sqrt(ed) * std::pow(pd, eps), ed * ed * std::pow(pd, eps - 1.0));
      h = ceil_positive(std::min(schedule, std::sqrt(pd) * lp * lp));
    }
  }
  return std::clamp<std::uint64_t>(h, 1, cap);
}

IdentityResult test_known_t(ShiftOracle& oracle_s, Residue t, const HPolicy& policy) {
  const std::uint64_t h = choose_h(oracle_s.context(), oracle_s.params(), Variant::KnownT, policy);
  return test_known_t(oracle_s, t, h);
}

IdentityResult test_known_t(ShiftOracle& oracle_s, Residue t, std::uint64_t h) {
  const PrimeContext& ctx = oracle_s.context();
  if (t >= ctx.p()) throw Error(Errc::OutOfRange, "t is not a residue");
  if (!oracle_s.is_forbidden(ctx.neg(t))) {
    throw Error(Errc::InvalidArgument, "oracle must forbid x = -t");
  }
  if (h == 0 || h >= ctx.p()) throw Error(Errc::OutOfRange, "h must lie in [1, p - 1]");
  IdentityResult result{Verdict::Equal, 0, h};
  for (Residue y = 1; y <= h; ++y) {
    const Residue y_inv = ctx.inv(y);
    const Residue answer = oracle_s.query(ctx.sub(y_inv, t));
    ++result.probes;
    if (answer != ctx.pow(y_inv, oracle_s.e())) {
      result.verdict = Verdict::Distinct;
      break;
    }
  }
  return result;
}

IdentityResult test_unknown_t(ShiftOracle& oracle_s, ShiftOracle& oracle_t,
                              const HPolicy& policy) {
  if (oracle_s.p() != oracle_t.p() || oracle_s.e() != oracle_t.e()) {
    throw Error(Errc::MismatchedParams, "oracles disagree on (p, e)");
  }
  const std::uint64_t h =
      choose_h(oracle_s.context(), oracle_s.params(), Variant::UnknownT, policy);
  return test_unknown_t(oracle_s, oracle_t, h);
}

IdentityResult test_unknown_t(ShiftOracle& oracle_s, ShiftOracle& oracle_t, std::uint64_t h) {
  if (oracle_s.p() != oracle_t.p() || oracle_s.e() != oracle_t.e()) {
    throw Error(Errc::MismatchedParams, "oracles disagree on (p, e)");
  }
  if (h >= oracle_s.p()) throw Error(Errc::OutOfRange, "h must be below p");
  IdentityResult result{Verdict::Equal, 0, h};
  for (Residue x = 0; x <= h; ++x) {
    const Residue a = oracle_s.query(x);
    const Residue b = oracle_t.query(x);
    ++result.probes;
    if (a != b) {
      result.verdict = Verdict::Distinct;
      break;
    }
  }
  return result;
}

}  // namespace shiftbreak
