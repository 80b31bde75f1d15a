#ifndef RETENTION_VALIDATE_HPP
#define RETENTION_VALIDATE_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "retention/instance.hpp"

namespace retention {

/// Property of a well-formed instance that a validation witness refutes.
enum class Axiom {
  sys1,                ///< bundle member disagrees with the history up to t
  sys2,                ///< two entries for the same prefix class differ
  sys3,                ///< bundle member is not in its own later bundle
  sys4,                ///< concatenation through an indistinguishable disturbance escapes
  constraint_initial,  ///< (t0, x0) is not allowed by the constraint
  constraint_closure,  ///< constraint is not closed under prefix classes
  totality,            ///< no system entry for some (t, prefix class, omega)
  empty_bundle,        ///< system entry with an empty bundle
};

inline constexpr std::array<Axiom, 8> all_axioms = {
    Axiom::sys1, Axiom::sys2, Axiom::sys3, Axiom::sys4, Axiom::constraint_initial,
    Axiom::constraint_closure, Axiom::totality, Axiom::empty_bundle};

inline const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::sys1: return "sys1";
    case Axiom::sys2: return "sys2";
    case Axiom::sys3: return "sys3";
    case Axiom::sys4: return "sys4";
    case Axiom::constraint_initial: return "constraint_initial";
    case Axiom::constraint_closure: return "constraint_closure";
    case Axiom::totality: return "totality";
    case Axiom::empty_bundle: return "empty_bundle";
  }
  return "unknown";
}

/// Concrete tuple refuting an axiom. Unused coordinates stay empty.
///
/// Field meaning per axiom:
///  - sys1: bundle S(t,x,omega) contains h with a different prefix at t.
///  - sys2: entry keyed by x2 for the class of x at t differs from the one keyed by x.
///  - sys3: h in S(t,x,omega) but h not in S(tau,h,omega).
///  - sys4: S(t,x,omega), S(t,x,omega2) agree up to tau, h in the first,
///          h2 in S(tau,h,omega2), yet h2 not in S(t,x,omega2).
///  - constraint_closure: (t,x) allowed but (t,x2) is not, though they share a prefix.
struct Violation {
  Axiom axiom{};
  std::optional<TimeIndex> t{}, tau{};
  std::optional<TrajId> x{}, x2{}, h{}, h2{};
  std::optional<DistId> omega{}, omega2{};
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] bool has(Axiom a) const {
    return std::any_of(violations.begin(), violations.end(),
                       [a](const Violation& v) { return v.axiom == a; });
  }
  [[nodiscard]] std::size_t count(Axiom a) const {
    return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(), [a](const Violation& v) { return v.axiom == a; }));
  }
};

namespace detail {

inline bool contains(const TrajSet& s, TrajId h) { return std::binary_search(s.begin(), s.end(), h); }

/// Ascending class representatives at time t.
inline TrajSet class_representatives(const Instance& inst, TimeIndex t) {
  TrajSet reps;
  for (TrajId x = 0; x < inst.num_trajectories(); ++x)
    if (inst.canonical(t, x) == x) reps.push_back(x);
  return reps;
}

}  // namespace detail

/// Checks sys1-sys4, totality and the two constraint conditions exhaustively.
///
/// Checks that need a missing entry skip it; the gap itself is reported under
/// `totality`. The report is empty iff the instance is well formed.
inline ValidationReport validate_axioms(const Instance& inst) {
  using detail::contains;
  ValidationReport report;
  auto add = [&](Violation v) { report.violations.push_back(std::move(v)); };

  const std::size_t nt = inst.num_times();
  const std::size_t nw = inst.num_disturbances();
  std::vector<TrajSet> reps(nt);
  for (TimeIndex t = 0; t < nt; ++t) reps[t] = detail::class_representatives(inst, t);

  for (TimeIndex t = 0; t < nt; ++t)
    for (auto x : reps[t])
      for (DistId w = 0; w < nw; ++w) {
        const auto* b = inst.find_bundle(t, x, w);
        if (b == nullptr)
          add({.axiom = Axiom::totality, .t = t, .x = x, .omega = w});
        else if (b->empty())
          add({.axiom = Axiom::empty_bundle, .t = t, .x = x, .omega = w});
      }

  for (const auto& e : inst.system()) {
    const auto* b = inst.find_bundle(e.t, e.x, e.omega);
    if (b != &e.bundle && *b != e.bundle) {
      const auto rep = inst.canonical(e.t, e.x);
      add({.axiom = Axiom::sys2, .t = e.t, .x = rep, .x2 = e.x, .omega = e.omega});
    }
  }

  for (TimeIndex t = 0; t < nt; ++t)
    for (auto x : reps[t])
      for (DistId w = 0; w < nw; ++w) {
        const auto* b = inst.find_bundle(t, x, w);
        if (b == nullptr) continue;
        for (auto h : *b) {
          if (inst.canonical(t, h) != x) {
            add({.axiom = Axiom::sys1, .t = t, .x = x, .h = h, .omega = w});
            continue;
          }
          for (TimeIndex tau = t + 1; tau < nt; ++tau) {
            const auto* later = inst.find_bundle(tau, h, w);
            if (later != nullptr && !contains(*later, h))
              add({.axiom = Axiom::sys3, .t = t, .tau = tau, .x = x, .h = h, .omega = w});
          }
        }
      }

  for (TimeIndex t = 0; t < nt; ++t)
    for (auto x : reps[t])
      for (DistId w = 0; w < nw; ++w) {
        const auto* b = inst.find_bundle(t, x, w);
        if (b == nullptr) continue;
        for (DistId w2 = 0; w2 < nw; ++w2) {
          const auto* b2 = inst.find_bundle(t, x, w2);
          if (b2 == nullptr) continue;
          for (TimeIndex tau = t; tau < nt; ++tau) {
            if (prefix_set(inst, *b, tau) != prefix_set(inst, *b2, tau)) continue;
            for (auto h : *b) {
              const auto* next = inst.find_bundle(tau, h, w2);
              if (next == nullptr) continue;
              for (auto h2 : *next)
                if (!contains(*b2, h2))
                  add({.axiom = Axiom::sys4, .t = t, .tau = tau, .x = x, .h = h, .h2 = h2,
                       .omega = w, .omega2 = w2});
            }
          }
        }
      }

  if (!inst.in_constraint(inst.t0(), inst.x0()))
    add({.axiom = Axiom::constraint_initial, .t = inst.t0(), .x = inst.x0()});
  for (const auto& [t, x] : inst.constraint())
    for (auto y : inst.prefix_class(t, x))
      if (!inst.in_constraint(t, y))
        add({.axiom = Axiom::constraint_closure, .t = t, .x = x, .x2 = y});

  return report;
}

/// Copy of `inst` whose constraint is completed to its prefix closure.
inline Instance close_constraint(const Instance& inst) {
  InstanceData d = inst.data();
  for (const auto& [t, x] : inst.constraint())
    for (auto y : inst.prefix_class(t, x)) d.constraint.emplace(t, y);
  return Instance(std::move(d));
}

}  // namespace retention

#endif  // RETENTION_VALIDATE_HPP
