#ifndef RETENTION_QUASISTRATEGY_HPP
#define RETENTION_QUASISTRATEGY_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "retention/absorption.hpp"

namespace retention {

struct MembershipViolation {
  enum class Kind { empty_value, value_escape, anticipation };
  Kind kind{};
  DistId nu = 0;
  std::optional<TrajId> h{};        // value_escape
  std::optional<DistId> nu2{};      // anticipation
  std::optional<TimeIndex> tau{};   // anticipation
};

inline const char* to_string(MembershipViolation::Kind k) {
  switch (k) {
    case MembershipViolation::Kind::empty_value: return "empty_value";
    case MembershipViolation::Kind::value_escape: return "value_escape";
    case MembershipViolation::Kind::anticipation: return "anticipation";
  }
  return "unknown";
}

struct MembershipReport {
  bool is_member = true;
  std::vector<MembershipViolation> violations;
};

namespace detail {

inline const TrajSet& value_or_empty(const Quasistrategy& qs, DistId nu) {
  static const TrajSet empty;
  auto it = qs.mapping.find(nu);
  return it == qs.mapping.end() ? empty : it->second;
}

}  // namespace detail

// Single-clause checks. Each returns true when the clause is violated.

inline bool value_is_empty(const Quasistrategy& qs, DistId nu) {
  return detail::value_or_empty(qs, nu).empty();
}

inline bool value_escapes(const Instance& inst, const Quasistrategy& qs, DistId nu, TrajId h) {
  const auto& b = bundle(inst, qs.anchor.t, qs.anchor.x, nu);
  const auto& v = detail::value_or_empty(qs, nu);
  return std::binary_search(v.begin(), v.end(), h) && !std::binary_search(b.begin(), b.end(), h);
}

/// Initial bundles for nu and nu2 agree up to tau but the values do not.
inline bool anticipates(const Instance& inst, const Quasistrategy& qs, DistId nu, DistId nu2,
                        TimeIndex tau) {
  const auto& b1 = bundle(inst, inst.t0(), inst.x0(), nu);
  const auto& b2 = bundle(inst, inst.t0(), inst.x0(), nu2);
  if (prefix_set(inst, b1, tau) != prefix_set(inst, b2, tau)) return false;
  return prefix_set(inst, detail::value_or_empty(qs, nu), tau) !=
         prefix_set(inst, detail::value_or_empty(qs, nu2), tau);
}

/// Checks the three membership clauses: nonempty values, values inside the
/// bundles at the anchor, and non-anticipation over every pair and every grid point.
inline MembershipReport check_quasistrategy(const Instance& inst, const Quasistrategy& qs) {
  using Kind = MembershipViolation::Kind;
  const auto domain = compatible_disturbances(inst, qs.anchor);
  for (const auto& [nu, value] : qs.mapping)
    if (std::find(domain.begin(), domain.end(), nu) == domain.end())
      throw PreconditionError("check_quasistrategy: mapping has a disturbance outside the domain");

  MembershipReport r;
  for (auto nu : domain) {
    if (value_is_empty(qs, nu)) r.violations.push_back({.kind = Kind::empty_value, .nu = nu});
    for (auto h : detail::value_or_empty(qs, nu))
      if (value_escapes(inst, qs, nu, h))
        r.violations.push_back({.kind = Kind::value_escape, .nu = nu, .h = h});
  }
  for (std::size_t i = 0; i < domain.size(); ++i)
    for (std::size_t j = i + 1; j < domain.size(); ++j)
      for (TimeIndex tau = 0; tau < inst.num_times(); ++tau)
        if (anticipates(inst, qs, domain[i], domain[j], tau))
          r.violations.push_back(
              {.kind = Kind::anticipation, .nu = domain[i], .nu2 = domain[j], .tau = tau});
  r.is_member = r.violations.empty();
  return r;
}

/// The program-bundle quasistrategy at a kernel state.
inline Quasistrategy build_quasistrategy(const Instance& inst, const StateSet& kernel, const State& s) {
  if (!kernel.contains(s)) throw PreconditionError("build_quasistrategy: state is not in the kernel");
  Quasistrategy qs{.anchor = s, .mapping = {}};
  for (auto nu : compatible_disturbances(inst, s))
    qs.mapping.emplace(nu, program_bundle(inst, kernel, s, nu));
  return qs;
}

/// True iff every trajectory the quasistrategy admits stays in `N` from the anchor time on.
inline bool check_retention(const Instance& inst, const Quasistrategy& qs, const StateSet& N) {
  for (auto nu : compatible_disturbances(inst, qs.anchor))
    for (auto h : detail::value_or_empty(qs, nu))
      for (TimeIndex tau = qs.anchor.t; tau < inst.num_times(); ++tau)
        if (!N.contains({tau, inst.canonical(tau, h), nu})) return false;
  return true;
}

struct Verdict {
  bool solvable = false;
  std::optional<DistId> omega0;
  std::optional<Quasistrategy> strategy;
};

/// Scans disturbances in index order for an initial state inside the kernel.
inline Verdict solvable(const Instance& inst, const KernelResult& kr) {
  if (!kr.stable) throw PreconditionError("solvable: kernel result is not stable");
  for (DistId w = 0; w < inst.num_disturbances(); ++w) {
    const State s{inst.t0(), inst.canonical(inst.t0(), inst.x0()), w};
    if (kr.kernel.contains(s))
      return {.solvable = true, .omega0 = w, .strategy = build_quasistrategy(inst, kr.kernel, s)};
  }
  return {};
}

}  // namespace retention

#endif  // RETENTION_QUASISTRATEGY_HPP
