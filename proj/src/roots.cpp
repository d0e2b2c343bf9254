#include "shiftbreak/roots.hpp"

#include <algorithm>
#include <numeric>

#include "shiftbreak/error.hpp"

namespace shiftbreak {
namespace {

// a^-1 mod m for gcd(a, m) = 1, m >= 1.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 old_r = static_cast<__int128>(a % m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) throw Error(Errc::NotCoprime, "exponent not invertible modulo group order");
  __int128 res = old_s % static_cast<__int128>(m);
  if (res < 0) res += m;
  return static_cast<std::uint64_t>(res);
}

std::uint64_t ipow(std::uint64_t base, unsigned k) {
  std::uint64_t out = 1;
  while (k-- > 0) out *= base;
  return out;
}

void sort_unique(std::vector<Residue>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// For each prime of e, an element of H_n = {x : n | ind x} that has no
// ell-th root inside H_n; unused (nullopt) when ell does not divide |H_n|.
struct SubgroupPlan {
  std::uint64_t n = 1;
  std::uint64_t order = 1;
  std::vector<std::pair<PrimeFactor, std::optional<Residue>>> steps;
};

// Solutions of x^e = a inside H_n, taking prime-order roots one at a time.
std::vector<Residue> roots_in_subgroup(const PrimeContext& ctx, const SubgroupPlan& plan,
                                       Residue a) {
  if (ctx.pow(a, plan.order) != 1) return {};
  std::vector<Residue> current{a};
  for (const auto& [factor, nonresidue] : plan.steps) {
    for (unsigned rep = 0; rep < factor.multiplicity && !current.empty(); ++rep) {
      std::vector<Residue> next;
      for (Residue c : current) {
        if (!nonresidue) {
          next.push_back(root_coprime(ctx, plan.order, factor.prime, c));
        } else {
          auto roots = roots_prime_given_witness(ctx, plan.order, factor.prime, *nonresidue, c);
          next.insert(next.end(), roots.begin(), roots.end());
        }
      }
      current = std::move(next);
    }
  }
  sort_unique(current);
  return current;
}

SubgroupPlan plan_for(const PrimeContext& ctx, const ExponentParams& params,
                      const WitnessSet& witnesses) {
  SubgroupPlan plan;
  plan.n = witnesses.modulus();
  plan.order = ctx.group_order() / plan.n;
  for (const auto& factor : params.e_factors()) {
    const Witness* w = witnesses.find(factor.prime);
    if (w == nullptr) {
      throw Error(Errc::IncompleteWitnesses,
                  "no witness for prime " + std::to_string(factor.prime) + " of e");
    }
    if (w->gamma == w->alpha) {
      plan.steps.emplace_back(factor, std::nullopt);
      continue;
    }
    // Lift the witness to b with v_ell(ind b) = gamma exactly and every other
    // prime power of n dividing ind b; then b lies in H_n but is not an
    // ell-th power there.
    const unsigned own = index_valuation(ctx, factor.prime, *w->value);
    if (own > w->gamma) throw Error(Errc::BadWitness, "witness has too many ell-th roots");
    const std::uint64_t lift = ipow(factor.prime, w->gamma - own);
    const std::uint64_t cofactor = plan.n / ipow(factor.prime, w->gamma);
    Residue b = ctx.pow(ctx.pow(*w->value, lift), cofactor);
    plan.steps.emplace_back(factor, b);
  }
  return plan;
}

}  // namespace

WitnessSet WitnessSet::nonresidues(const PrimeContext& ctx, const ExponentParams& params) {
  std::vector<Witness> entries;
  for (const auto& f : params.e_factors()) {
    entries.push_back({f.prime, ctx.alpha(f.prime), 0, least_nonresidue(ctx, f.prime)});
  }
  return make(ctx, params, std::move(entries));
}

WitnessSet WitnessSet::make(const PrimeContext& ctx, const ExponentParams& params,
                            std::vector<Witness> entries) {
  WitnessSet out;
  std::sort(entries.begin(), entries.end(),
            [](const Witness& a, const Witness& b) { return a.prime < b.prime; });
  for (auto& w : entries) {
    if (w.prime < 2 || params.e() % w.prime != 0 || !is_prime(w.prime)) {
      throw Error(Errc::InvalidArgument, "witness prime must divide e");
    }
    w.alpha = ctx.alpha(w.prime);
    if (w.gamma > w.alpha) throw Error(Errc::InvalidArgument, "gamma exceeds alpha");
    if (w.gamma < w.alpha) {
      if (!w.value || *w.value == 0 || *w.value >= ctx.p()) {
        throw Error(Errc::BadWitness, "missing witness value");
      }
      const std::uint64_t k = ctx.group_order() / ipow(w.prime, w.gamma + 1);
      if (ctx.pow(*w.value, k) == 1) {
        throw Error(Errc::BadWitness, std::to_string(*w.value) + " is an ell^(gamma+1)-th power");
      }
    }
    out.modulus_ *= ipow(w.prime, w.gamma);
  }
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].prime == entries[i - 1].prime) {
      throw Error(Errc::InvalidArgument, "duplicate witness prime");
    }
  }
  out.entries_ = std::move(entries);
  return out;
}

const Witness* WitnessSet::find(std::uint64_t ell) const noexcept {
  for (const auto& w : entries_) {
    if (w.prime == ell) return &w;
  }
  return nullptr;
}

unsigned index_valuation(const PrimeContext& ctx, std::uint64_t ell, Residue w) {
  const unsigned alpha = ctx.alpha(ell);
  unsigned gamma = 0;
  std::uint64_t power = 1;
  for (unsigned k = 1; k <= alpha; ++k) {
    power *= ell;
    if (ctx.pow(w, ctx.group_order() / power) != 1) break;
    gamma = k;
  }
  return gamma;
}

Residue root_coprime(const PrimeContext& ctx, std::uint64_t m, std::uint64_t d_exp, Residue a) {
  if (m == 0 || ctx.group_order() % m != 0) {
    throw Error(Errc::InvalidArgument, "subgroup order must divide p - 1");
  }
  if (std::gcd(d_exp, m) != 1) throw Error(Errc::NotCoprime, "gcd(d, m) != 1");
  if (ctx.pow(a, m) != 1) throw Error(Errc::NotInSubgroup, "a is not in the order-m subgroup");
  return ctx.pow(a, inverse_mod(d_exp % m, m));
}

std::vector<Residue> roots_prime_given_witness(const PrimeContext& ctx, std::uint64_t m,
                                               std::uint64_t r, Residue b, Residue a) {
  if (m == 0 || ctx.group_order() % m != 0) {
    throw Error(Errc::InvalidArgument, "subgroup order must divide p - 1");
  }
  if (r < 2 || m % r != 0) throw Error(Errc::NotDividing, "r must divide the group order");
  if (ctx.pow(a, m) != 1) throw Error(Errc::NotInSubgroup, "a is not in the subgroup");
  if (ctx.pow(b, m) != 1 || ctx.pow(b, m / r) == 1) {
    throw Error(Errc::BadWitness, "b must be a subgroup element without an r-th root");
  }
  if (ctx.pow(a, m / r) != 1) return {};

  const unsigned k = valuation(m, r);
  const std::uint64_t rk = ipow(r, k);
  const std::uint64_t q = m / rk;

  // b^q generates the r-Sylow subgroup; zeta has order exactly r.
  const Residue c = ctx.pow(b, q);
  const Residue zeta = ctx.pow(c, rk / r);

  const Residue a_r = ctx.pow(a, q * inverse_mod(q % rk, rk));
  Residue x_q = 1;
  if (q > 1) {
    const Residue a_q = ctx.pow(a, rk * inverse_mod(rk % q, q));
    x_q = ctx.pow(a_q, inverse_mod(r % q, q));
  }

  std::vector<Residue> zeta_powers(r);
  zeta_powers[0] = 1;
  for (std::uint64_t i = 1; i < r; ++i) zeta_powers[i] = ctx.mul(zeta_powers[i - 1], zeta);

  // Digits of log_c(a_r) in base r.
  const Residue c_inv = ctx.inv(c);
  std::uint64_t log = 0;
  std::uint64_t place = 1;
  for (unsigned i = 0; i < k; ++i) {
    const Residue residual = ctx.mul(a_r, ctx.pow(c_inv, log));
    const Residue probe = ctx.pow(residual, ipow(r, k - 1 - i));
    const auto it = std::find(zeta_powers.begin(), zeta_powers.end(), probe);
    if (it == zeta_powers.end()) throw Error(Errc::AlgorithmFailure, "digit search failed");
    log += static_cast<std::uint64_t>(it - zeta_powers.begin()) * place;
    place *= r;
  }

  const Residue x0 = ctx.mul(ctx.pow(c, log / r), x_q);
  if (log % r != 0 || ctx.pow(x0, r) != a) {
    throw Error(Errc::AlgorithmFailure, "root extraction produced a non-root");
  }
  std::vector<Residue> out;
  out.reserve(r);
  for (Residue z : zeta_powers) out.push_back(ctx.mul(x0, z));
  sort_unique(out);
  return out;
}

std::vector<Residue> all_eth_roots(const PrimeContext& ctx, const ExponentParams& params,
                                   Residue a, const WitnessSet& witnesses) {
  const SubgroupPlan plan = plan_for(ctx, params, witnesses);
  if (plan.n != 1) throw Error(Errc::BadWitness, "full root extraction needs ell-th nonresidues");
  if (a % ctx.p() == 0) return {0};
  return roots_in_subgroup(ctx, plan, a);
}

std::vector<Residue> restricted_roots(const PrimeContext& ctx, std::uint64_t ell, unsigned beta,
                                      std::optional<Residue> witness, Residue a) {
  const unsigned alpha = ctx.alpha(ell);
  if (alpha == 0 || !is_prime(ell)) throw Error(Errc::NotDividing, "ell must be a prime | p - 1");
  if (beta > alpha) throw Error(Errc::InvalidArgument, "beta exceeds alpha");
  if (a == 0 || a >= ctx.p()) throw Error(Errc::InvalidArgument, "A must be a nonzero residue");

  const std::uint64_t m = ctx.group_order() / ipow(ell, beta);
  if (ctx.pow(a, m) != 1) return {};
  if (beta == alpha) return {root_coprime(ctx, m, ell, a)};

  if (!witness || *witness == 0 || *witness >= ctx.p()) {
    throw Error(Errc::BadWitness, "an ell^(beta+1)-th power nonresidue is required");
  }
  const unsigned own = index_valuation(ctx, ell, *witness);
  if (own > beta) throw Error(Errc::BadWitness, "witness is an ell^(beta+1)-th power");
  const Residue b = ctx.pow(*witness, ipow(ell, beta - own));
  return roots_prime_given_witness(ctx, m, ell, b, a);
}

std::vector<Residue> roots_with_index_divisibility(const PrimeContext& ctx,
                                                   const ExponentParams& params,
                                                   const WitnessSet& witnesses, Residue a) {
  if (a == 0 || a >= ctx.p()) throw Error(Errc::InvalidArgument, "A must be a nonzero residue");
  return roots_in_subgroup(ctx, plan_for(ctx, params, witnesses), a);
}

std::vector<Residue> candidates_from_consecutive_powers(const PrimeContext& ctx,
                                                        const ExponentParams& params,
                                                        const WitnessSet& witnesses,
                                                        std::span<const Residue> answers) {
  const std::uint64_t n = witnesses.modulus();
  if (answers.size() != n + 1) {
    throw Error(Errc::LengthMismatch, "expected n + 1 = " + std::to_string(n + 1) + " answers");
  }
  const SubgroupPlan plan = plan_for(ctx, params, witnesses);

  auto satisfies_all = [&](Residue x) {
    for (std::uint64_t j = 0; j < answers.size(); ++j) {
      if (ctx.pow(ctx.add(x, j % ctx.p()), params.e()) != answers[j]) return false;
    }
    return true;
  };

  for (std::uint64_t j = 0; j < answers.size(); ++j) {
    if (answers[j] == 0) {
      const Residue x = ctx.neg(j % ctx.p());
      if (satisfies_all(x)) return {x};
      return {};
    }
  }

  std::vector<Residue> out;
  for (std::uint64_t j1 = 0; j1 < answers.size(); ++j1) {
    const Residue inv_a1 = ctx.inv(answers[j1]);
    for (std::uint64_t j2 = j1 + 1; j2 < answers.size(); ++j2) {
      const Residue ratio = ctx.mul(answers[j2], inv_a1);
      for (Residue y : roots_in_subgroup(ctx, plan, ratio)) {
        if (y == 1) continue;
        const Residue x =
            ctx.sub(ctx.mul((j2 - j1) % ctx.p(), ctx.inv(ctx.sub(y, 1))), j1 % ctx.p());
        if (satisfies_all(x)) out.push_back(x);
      }
    }
  }
  sort_unique(out);
  return out;
}

}  // namespace shiftbreak
