#include "shiftbreak/oracle.hpp"

#include <algorithm>

#include "shiftbreak/error.hpp"

namespace shiftbreak {

ShiftOracle::ShiftOracle(const PrimeContext& ctx, const ExponentParams& params, Residue s,
                         std::vector<Residue> forbidden)
    : ctx_(ctx), params_(params), secret_(s), forbidden_(std::move(forbidden)) {
  std::sort(forbidden_.begin(), forbidden_.end());
  forbidden_.erase(std::unique(forbidden_.begin(), forbidden_.end()), forbidden_.end());
}

ShiftOracle::ShiftOracle(ShiftOracle&& other) noexcept
    : ctx_(std::move(other.ctx_)),
      params_(std::move(other.params_)),
      secret_(other.secret_),
      forbidden_(std::move(other.forbidden_)),
      calls_(other.calls_.load()),
      rejected_(other.rejected_.load()) {}

bool ShiftOracle::is_forbidden(Residue x) const noexcept {
  return std::binary_search(forbidden_.begin(), forbidden_.end(), x);
}

Residue ShiftOracle::query(Residue x) {
  if (x >= ctx_.p()) throw Error(Errc::OutOfRange, "query input must be a residue");
  if (is_forbidden(x)) {
    rejected_.fetch_add(1, std::memory_order_relaxed);
    throw Error(Errc::ForbiddenInput, "query at " + std::to_string(x) + " is forbidden");
  }
  calls_.fetch_add(1, std::memory_order_relaxed);
  return ctx_.pow(ctx_.add(x, secret_), params_.e());
}

ShiftOracle new_oracle(const PrimeContext& ctx, const ExponentParams& params, Residue s,
                       std::vector<Residue> forbidden) {
  if (s >= ctx.p()) throw Error(Errc::OutOfRange, "secret shift must be below p");
  for (Residue x : forbidden) {
    if (x >= ctx.p()) throw Error(Errc::OutOfRange, "forbidden inputs must be residues");
  }
  return ShiftOracle(ctx, params, s, std::move(forbidden));
}

}  // namespace shiftbreak
