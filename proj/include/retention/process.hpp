#ifndef RETENTION_PROCESS_HPP
#define RETENTION_PROCESS_HPP

#include <vector>

#include "retention/instance.hpp"

namespace retention {

/// All states reachable from the initial history: (t, x, omega) with t >= t0
/// and the prefix of x up to t matching some member of S(t0, x0, omega).
inline StateSet reachable_states(const Instance& inst) {
  StateSet out;
  for (DistId w = 0; w < inst.num_disturbances(); ++w)
    for (auto h : bundle(inst, inst.t0(), inst.x0(), w))
      for (TimeIndex t = inst.t0(); t < inst.num_times(); ++t)
        out.insert({t, inst.canonical(t, h), w});
  return out;
}

/// Disturbances whose initial bundles are indistinguishable from that of
/// `omega` on the prefix up to `t`. Depends on the state only through (t, omega).
inline std::vector<DistId> compatible_disturbances(const Instance& inst, TimeIndex t, DistId omega) {
  const auto reference = prefix_set(inst, bundle(inst, inst.t0(), inst.x0(), omega), t);
  std::vector<DistId> out;
  for (DistId w = 0; w < inst.num_disturbances(); ++w)
    if (w == omega || prefix_set(inst, bundle(inst, inst.t0(), inst.x0(), w), t) == reference)
      out.push_back(w);
  return out;
}

/// Omega(t, x, omega) for a reachable state.
inline std::vector<DistId> compatible_disturbances(const Instance& inst, const State& s) {
  if (!inst.is_canonical(s) || !reachable_states(inst).contains(s))
    throw PreconditionError("compatible_disturbances: state is not reachable");
  return compatible_disturbances(inst, s.t, s.omega);
}

/// Reachable states whose (t, x) is allowed by the constraint.
inline StateSet target_set(const Instance& inst) {
  StateSet out;
  for (const auto& s : reachable_states(inst))
    if (inst.in_constraint(s.t, s.x)) out.insert(s);
  return out;
}

/// Number of raw (t, x, omega) triples a canonical set stands for, counting
/// every member of each prefix class separately.
inline std::size_t triple_count(const Instance& inst, const StateSet& set) {
  std::size_t n = 0;
  for (const auto& s : set) n += inst.class_size(s.t, s.x);
  return n;
}

}  // namespace retention

#endif  // RETENTION_PROCESS_HPP
