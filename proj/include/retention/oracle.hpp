#ifndef RETENTION_ORACLE_HPP
#define RETENTION_ORACLE_HPP

// Brute-force certification of the absorption kernel.
//
// Nothing here includes or calls the absorption engine: the oracle works from
// the membership conditions of quasistrategies and the retention property
// alone, so agreement with iterate_to_fixpoint() is a genuine cross-check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "retention/process.hpp"

namespace retention {

inline constexpr std::uint64_t default_enumeration_budget = 1'000'000;

struct DecomposabilityReport {
  bool decomposable = true;
  /// (omega1, omega2, t): omega1 up to and including t, omega2 after, is not in the set.
  struct Witness {
    DistId omega1 = 0;
    DistId omega2 = 0;
    TimeIndex t = 0;
  };
  std::optional<Witness> witness;
};

namespace oracle_detail {

/// One anchor state's search space: a nonempty subset of each bundle, as a bitmask
/// over the bundle's members.
struct Space {
  State anchor;
  std::vector<DistId> domain;
  std::vector<TrajSet> bundles;                 // per domain position
  std::vector<std::vector<std::vector<TrajId>>> reps;  // [k][tau][pos] -> class representative
  // linked[i][j][tau]: initial bundles of domain[i], domain[j] agree up to tau
  std::vector<std::vector<std::vector<bool>>> linked;
};

inline std::uint64_t raw_count(const Space& sp) {
  std::uint64_t total = 1;
  for (const auto& b : sp.bundles) {
    if (b.size() >= 63) return UINT64_MAX;
    const std::uint64_t choices = (std::uint64_t{1} << b.size()) - 1;
    if (choices != 0 && total > UINT64_MAX / choices) return UINT64_MAX;
    total *= choices;
  }
  return total;
}

inline Space make_space(const Instance& inst, const State& s, std::uint64_t budget) {
  Space sp;
  sp.anchor = s;
  sp.domain = compatible_disturbances(inst, s);
  const std::size_t nt = inst.num_times();
  for (std::size_t k = 0; k < sp.domain.size(); ++k) {
    sp.bundles.push_back(bundle(inst, s.t, s.x, sp.domain[k]));
    sp.reps.emplace_back(nt);
    for (TimeIndex tau = 0; tau < nt; ++tau)
      for (auto h : sp.bundles.back()) sp.reps[k][tau].push_back(inst.canonical(tau, h));
  }
  if (raw_count(sp) > budget)
    throw BudgetExceeded("quasistrategy enumeration at (t=" + std::to_string(s.t) + ", x=" +
                         std::to_string(s.x) + ", omega=" + std::to_string(s.omega) +
                         ") exceeds the budget of " + std::to_string(budget));
  const auto n = sp.domain.size();
  sp.linked.assign(n, std::vector<std::vector<bool>>(n, std::vector<bool>(nt, false)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (TimeIndex tau = 0; tau < nt; ++tau)
        sp.linked[i][j][tau] =
            prefix_set(inst, bundle(inst, inst.t0(), inst.x0(), sp.domain[i]), tau) ==
            prefix_set(inst, bundle(inst, inst.t0(), inst.x0(), sp.domain[j]), tau);
  return sp;
}

inline std::vector<TrajId> prefixes(const Space& sp, std::size_t k, TimeIndex tau, std::uint64_t mask) {
  std::vector<TrajId> out;
  for (std::size_t p = 0; p < sp.bundles[k].size(); ++p)
    if (mask >> p & 1U) out.push_back(sp.reps[k][tau][p]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Depth-first over domain positions; `allowed[k]` restricts the usable bits
/// (all bits when empty). Returns false if the visitor stopped the search.
inline bool search(const Space& sp, const std::vector<std::uint64_t>& allowed, std::size_t k,
                   std::vector<std::uint64_t>& masks,
                   const std::function<bool(const std::vector<std::uint64_t>&)>& visit) {
  if (k == sp.domain.size()) return visit(masks);
  const std::uint64_t full = (std::uint64_t{1} << sp.bundles[k].size()) - 1;
  const std::uint64_t room = allowed.empty() ? full : allowed[k];
  for (std::uint64_t m = 1; m <= full; ++m) {
    if ((m & ~room) != 0) continue;
    bool consistent = true;
    for (std::size_t j = 0; j < k && consistent; ++j)
      for (TimeIndex tau = 0; tau < sp.reps[k].size() && consistent; ++tau)
        if (sp.linked[j][k][tau]) consistent = prefixes(sp, j, tau, masks[j]) == prefixes(sp, k, tau, m);
    if (!consistent) continue;
    masks[k] = m;
    if (!search(sp, allowed, k + 1, masks, visit)) return false;
  }
  return true;
}

}  // namespace oracle_detail

/// Calls `visit` on every member of the quasistrategy class at `s`, in a fixed
/// order, until it returns false. Throws BudgetExceeded when the raw product of
/// nonempty-subset counts over the compatible disturbances exceeds `budget`.
inline void for_each_quasistrategy(const Instance& inst, const State& s,
                                   const std::function<bool(const Quasistrategy&)>& visit,
                                   std::uint64_t budget = default_enumeration_budget) {
  const auto sp = oracle_detail::make_space(inst, s, budget);
  std::vector<std::uint64_t> masks(sp.domain.size(), 0);
  oracle_detail::search(sp, {}, 0, masks, [&](const std::vector<std::uint64_t>& chosen) {
    Quasistrategy qs{.anchor = s, .mapping = {}};
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      TrajSet value;
      for (std::size_t p = 0; p < sp.bundles[k].size(); ++p)
        if (chosen[k] >> p & 1U) value.push_back(sp.bundles[k][p]);
      qs.mapping.emplace(sp.domain[k], std::move(value));
    }
    return visit(qs);
  });
}

/// All quasistrategies anchored at a reachable state.
inline std::vector<Quasistrategy> enumerate_quasistrategies(
    const Instance& inst, const State& s, std::uint64_t budget = default_enumeration_budget) {
  if (!inst.is_canonical(s) || !reachable_states(inst).contains(s))
    throw PreconditionError("enumerate_quasistrategies: state is not reachable");
  std::vector<Quasistrategy> out;
  for_each_quasistrategy(inst, s, [&](const Quasistrategy& qs) {
    out.push_back(qs);
    return true;
  }, budget);
  return out;
}

namespace oracle_detail {

/// Does some quasistrategy at `s` keep every admitted trajectory inside `target`?
/// Any such quasistrategy only uses bundle members that individually stay in
/// `target`, so the search is restricted to those members without losing generality.
inline bool retainable(const Instance& inst, const StateSet& target, const Space& sp) {
  std::vector<std::uint64_t> allowed(sp.domain.size(), 0);
  for (std::size_t k = 0; k < sp.domain.size(); ++k) {
    for (std::size_t p = 0; p < sp.bundles[k].size(); ++p) {
      const auto h = sp.bundles[k][p];
      bool inside = true;
      for (TimeIndex tau = sp.anchor.t; tau < inst.num_times() && inside; ++tau)
        inside = target.contains({tau, inst.canonical(tau, h), sp.domain[k]});
      if (inside) allowed[k] |= std::uint64_t{1} << p;
    }
    if (allowed[k] == 0) return false;
  }
  bool found = false;
  std::vector<std::uint64_t> masks(sp.domain.size(), 0);
  search(sp, allowed, 0, masks, [&](const std::vector<std::uint64_t>&) {
    found = true;
    return false;
  });
  return found;
}

}  // namespace oracle_detail

/// States of the target set from which some quasistrategy retains the
/// process in the target set, found by exhaustive search.
inline StateSet oracle_kernel(const Instance& inst, std::uint64_t budget = default_enumeration_budget,
                              Execution exec = Execution::sequential) {
  const auto target = target_set(inst);
  const std::vector<State> states(target.begin(), target.end());
  std::vector<oracle_detail::Space> spaces;
  spaces.reserve(states.size());
  for (const auto& s : states) spaces.push_back(oracle_detail::make_space(inst, s, budget));

  std::vector<std::uint8_t> keep(states.size(), 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      keep[i] = oracle_detail::retainable(inst, target, spaces[i]) ? 1 : 0;
  };
  const std::size_t threads =
      exec == Execution::parallel
          ? std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), states.size())
          : 1;
  if (threads <= 1) {
    work(0, states.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (states.size() + threads - 1) / threads;
    for (std::size_t b = 0; b < states.size(); b += chunk)
      pool.emplace_back(work, b, std::min(states.size(), b + chunk));
  }

  StateSet out;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (keep[i]) out.insert(states[i]);
  return out;
}

/// omega1 on the grid points up to and including t, omega2 strictly after.
inline Disturbance splice(const Instance& inst, DistId omega1, DistId omega2, TimeIndex t) {
  Disturbance out = inst.disturbance(omega1);
  const auto& tail = inst.disturbance(omega2).values;
  for (TimeIndex i = t + 1; i < inst.num_times(); ++i) out.values[i] = tail[i];
  return out;
}

inline bool contains_disturbance(const Instance& inst, const Disturbance& w) {
  const auto& all = inst.data().disturbances;
  return std::find(all.begin(), all.end(), w) != all.end();
}

/// Whether the disturbance set is closed under splicing at every grid point;
/// otherwise reports the lexicographically first failing (omega1, omega2, t).
inline DecomposabilityReport is_decomposable(const Instance& inst) {
  for (DistId a = 0; a < inst.num_disturbances(); ++a)
    for (DistId b = 0; b < inst.num_disturbances(); ++b)
      for (TimeIndex t = 0; t < inst.num_times(); ++t)
        if (!contains_disturbance(inst, splice(inst, a, b, t)))
          return {.decomposable = false, .witness = DecomposabilityReport::Witness{a, b, t}};
  return {};
}

}  // namespace retention

#endif  // RETENTION_ORACLE_HPP
