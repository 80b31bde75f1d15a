#ifndef RETENTION_ABSORPTION_HPP
#define RETENTION_ABSORPTION_HPP

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "retention/process.hpp"

namespace retention {

/// Outcome of iterating the absorption operator from a target set.
struct KernelResult {
  StateSet kernel;
  /// Cardinality of each iterate as a set of raw (t, x, omega) triples; entry 0 is the start set.
  std::vector<std::size_t> trace;
  /// Same iterates counted as canonical prefix-class states.
  std::vector<std::size_t> class_trace;
  /// Applications of the operator until two consecutive iterates coincided.
  std::size_t iterations = 0;
  bool stable = false;
};

namespace detail {

inline TrajSet program_bundle_unchecked(const Instance& inst, const StateSet& H, const State& s,
                                        DistId nu) {
  TrajSet out;
  for (auto h : bundle(inst, s.t, s.x, nu)) {
    bool stays = true;
    for (TimeIndex tau = s.t; tau < inst.num_times() && stays; ++tau)
      stays = H.contains({tau, inst.canonical(tau, h), nu});
    if (stays) out.push_back(h);
  }
  return out;
}

inline bool survives(const Instance& inst, const StateSet& H, const State& s) {
  for (auto nu : compatible_disturbances(inst, s.t, s.omega))
    if (program_bundle_unchecked(inst, H, s, nu).empty()) return false;
  return true;
}

}  // namespace detail

/// Members of S(t, x, nu) that stay inside `H` at every time from t on.
inline TrajSet program_bundle(const Instance& inst, const StateSet& H, const State& s, DistId nu) {
  if (!inst.is_canonical(s) || !reachable_states(inst).contains(s))
    throw PreconditionError("program_bundle: state is not reachable");
  const auto compatible = compatible_disturbances(inst, s.t, s.omega);
  if (std::find(compatible.begin(), compatible.end(), nu) == compatible.end())
    throw PreconditionError("program_bundle: disturbance is not compatible with the state");
  return detail::program_bundle_unchecked(inst, H, s, nu);
}

/// One application of the program absorption operator: keeps the states of
/// `H` at which every compatible disturbance leaves a nonempty program bundle.
///
/// Per-state decisions are independent, so the parallel mode splits them over
/// threads; both modes return the same set.
inline StateSet absorb(const Instance& inst, const StateSet& H,
                       Execution exec = Execution::sequential) {
  const auto sysp = reachable_states(inst);
  for (const auto& s : H)
    if (!inst.is_canonical(s) || !sysp.contains(s))
      throw PreconditionError("absorb: set contains a state outside the reachable set");

  const std::vector<State> states(H.begin(), H.end());
  std::vector<std::uint8_t> keep(states.size(), 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) keep[i] = detail::survives(inst, H, states[i]) ? 1 : 0;
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

/// Iterates absorb() from `N` until it stabilizes.
///
/// The iterates form a decreasing chain of finite sets, so the chain is
/// constant after at most |N| strict decreases and the stable set is the
/// value of every transfinite iterate beyond that point. More than |N| + 1
/// applications therefore means a bug and raises InternalError.
inline KernelResult iterate_to_fixpoint(const Instance& inst, const StateSet& N,
                                        Execution exec = Execution::sequential) {
  KernelResult r;
  r.kernel = N;
  r.trace.push_back(triple_count(inst, N));
  r.class_trace.push_back(N.size());
  const std::size_t guard = r.trace.front() + 1;
  while (r.iterations < guard) {
    auto next = absorb(inst, r.kernel, exec);
    ++r.iterations;
    r.trace.push_back(triple_count(inst, next));
    r.class_trace.push_back(next.size());
    if (next == r.kernel) {
      r.stable = true;
      return r;
    }
    r.kernel = std::move(next);
  }
  throw InternalError("absorption iteration did not stabilize within |N| + 1 steps");
}

}  // namespace retention

#endif  // RETENTION_ABSORPTION_HPP
