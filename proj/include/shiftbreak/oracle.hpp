#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "shiftbreak/field.hpp"

namespace shiftbreak {

struct OracleTestAccess;

/// The sealed oracle x -> (x + s)^e. The shift s never leaves this class
/// except through OracleTestAccess, which only test code defines.
///
/// The call counter is atomic and counts successful queries only; a query
/// on a forbidden input throws ForbiddenInput and is tallied separately.
class ShiftOracle {
 public:
  ShiftOracle(ShiftOracle&& other) noexcept;
  ShiftOracle& operator=(ShiftOracle&&) = delete;
  ShiftOracle(const ShiftOracle&) = delete;
  ShiftOracle& operator=(const ShiftOracle&) = delete;

  Residue query(Residue x);

  std::uint64_t call_count() const noexcept { return calls_.load(std::memory_order_relaxed); }
  std::uint64_t rejected_count() const noexcept {
    return rejected_.load(std::memory_order_relaxed);
  }
  bool is_forbidden(Residue x) const noexcept;

  const PrimeContext& context() const noexcept { return ctx_; }
  const ExponentParams& params() const noexcept { return params_; }
  std::uint64_t p() const noexcept { return ctx_.p(); }
  std::uint64_t e() const noexcept { return params_.e(); }

 private:
  friend ShiftOracle new_oracle(const PrimeContext&, const ExponentParams&, Residue,
                                std::vector<Residue>);
  friend struct OracleTestAccess;

  ShiftOracle(const PrimeContext& ctx, const ExponentParams& params, Residue s,
              std::vector<Residue> forbidden);

  PrimeContext ctx_;
  ExponentParams params_;
  Residue secret_;
  std::vector<Residue> forbidden_;  // sorted
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> rejected_{0};
};

/// Throws OutOfRange unless 0 <= s < p and every forbidden input is a residue.
ShiftOracle new_oracle(const PrimeContext& ctx, const ExponentParams& params, Residue s,
                       std::vector<Residue> forbidden = {});

inline std::uint64_t call_count(const ShiftOracle& oracle) { return oracle.call_count(); }

}  // namespace shiftbreak
