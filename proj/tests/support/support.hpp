#ifndef RETENTION_TESTS_SUPPORT_HPP
#define RETENTION_TESTS_SUPPORT_HPP

// Test-only helpers: fixture loading, a generator of random well-formed
// instances, and input shuffling for determinism checks.

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "retention/retention.hpp"

#ifndef RETENTION_FIXTURE_DIR
#error "RETENTION_FIXTURE_DIR must be defined"
#endif

namespace retention::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(RETENTION_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture_text(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json fixture_json(const std::string& name) {
  return nlohmann::json::parse(read_fixture_text(name));
}

inline Instance fixture(const std::string& name) { return parse_instance(read_fixture_text(name)); }

// Copycat trajectory and disturbance ids.
inline constexpr TrajId c00 = 0, c01 = 1, c10 = 2, c11 = 3;
inline constexpr DistId wa = 0, wb = 1;

struct GeneratorConfig {
  std::size_t min_times = 1;
  std::size_t max_times = 3;
  std::size_t max_states = 3;
  std::size_t max_trajectories = 9;
  std::size_t max_disturbances = 4;
  std::size_t max_disturbance_values = 3;
  double constraint_density = 0.75;  // chance a prefix class is kept in D
  bool early_t0 = false;             // t0 in the first half of the grid
};

namespace detail {

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::size_t> nonempty_subset(std::mt19937_64& rng, const std::vector<std::size_t>& from,
                                                std::size_t max_size) {
  auto pool = from;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(pick(rng, 1, std::min(max_size, pool.size())));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

/// Random instance whose system map is given by stepwise transition sets
/// F(i, prefix, key(omega)): S(t, x, omega) is the set of trajectories that
/// agree with x up to t and take an allowed step at every later index. Such
/// maps satisfy all four axioms. Some instances are further perturbed by
/// single-entry edits that are kept only if the result still validates, so the
/// corpus is not restricted to this product form.
inline Instance random_instance(std::mt19937_64& rng, const GeneratorConfig& cfg = {}) {
  using detail::pick;
  for (;;) {
    const std::size_t n = pick(rng, cfg.min_times, cfg.max_times);
    const std::size_t nx = pick(rng, 1, cfg.max_states);
    const std::size_t ny = pick(rng, 1, cfg.max_disturbance_values);
    std::vector<std::size_t> alphabet(nx);
    std::iota(alphabet.begin(), alphabet.end(), 0);

    // Trajectory tree: root values, then children per prefix.
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> children;
    std::vector<std::vector<std::size_t>> layer;
    for (auto v : detail::nonempty_subset(rng, alphabet, 2)) layer.push_back({v});
    bool too_big = false;
    for (std::size_t depth = 1; depth < n && !too_big; ++depth) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& p : layer) {
        auto kids = detail::nonempty_subset(rng, alphabet, pick(rng, 0, 3) == 0 ? 3 : 2);
        children[p] = kids;
        for (auto k : kids) {
          auto q = p;
          q.push_back(k);
          next.push_back(std::move(q));
        }
      }
      layer = std::move(next);
      too_big = layer.size() > cfg.max_trajectories;
    }
    if (too_big || layer.size() > cfg.max_trajectories) continue;
    std::vector<std::vector<std::size_t>> trajs = layer;
    std::shuffle(trajs.begin(), trajs.end(), rng);

    // Disturbances.
    std::vector<std::vector<std::size_t>> space{{}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<std::size_t>> grown;
      for (const auto& w : space)
        for (std::size_t y = 0; y < ny; ++y) {
          auto g = w;
          g.push_back(y);
          grown.push_back(std::move(g));
        }
      space = std::move(grown);
    }
    std::vector<std::vector<std::size_t>> omegas;
    switch (pick(rng, 0, 2)) {
      case 0:  // constants
        for (std::size_t y = 0; y < ny && omegas.size() < cfg.max_disturbances; ++y)
          omegas.push_back(std::vector<std::size_t>(n, y));
        break;
      case 1:  // whole space when small, else random
        if (space.size() <= cfg.max_disturbances) {
          omegas = space;
          break;
        }
        [[fallthrough]];
      default: {
        std::shuffle(space.begin(), space.end(), rng);
        space.resize(pick(rng, 1, std::min(cfg.max_disturbances, space.size())));
        omegas = space;
      }
    }
    std::shuffle(omegas.begin(), omegas.end(), rng);

    // Step sets.
    const std::size_t key_mode = pick(rng, 0, 3);
    auto key_of = [&](std::size_t i, std::size_t w) -> std::size_t {
      switch (key_mode) {
        case 0: return omegas[w][i];
        case 1: return omegas[w][std::min(i + 1, n - 1)];
        case 2: return w;
        default: return 0;
      }
    };
    std::map<std::tuple<std::vector<std::size_t>, std::size_t>, std::vector<std::size_t>> steps;
    auto allowed = [&](const std::vector<std::size_t>& prefix, std::size_t i, std::size_t w) {
      auto k = std::make_tuple(prefix, key_of(i, w));
      auto it = steps.find(k);
      if (it == steps.end())
        it = steps.emplace(k, detail::nonempty_subset(rng, children.at(prefix), 3)).first;
      return it->second;
    };

    InstanceData d;
    d.time.points.resize(n);
    int label = static_cast<int>(pick(rng, 0, 5)) - 2;
    for (auto& p : d.time.points) p = (label += static_cast<int>(pick(rng, 1, 3)));
    d.time.t0_index = pick(rng, 0, cfg.early_t0 ? (n - 1) / 2 : n - 1);
    for (std::size_t v = 0; v < nx; ++v) d.states.push_back(static_cast<int>(v));
    for (std::size_t y = 0; y < ny; ++y) d.disturbance_values.push_back("y" + std::to_string(y));
    for (const auto& tr : trajs) d.trajectories.push_back({tr});
    for (const auto& w : omegas) d.disturbances.push_back({w});

    auto same_prefix = [&](std::size_t a, std::size_t b, std::size_t t) {
      return std::equal(trajs[a].begin(), trajs[a].begin() + static_cast<std::ptrdiff_t>(t) + 1,
                        trajs[b].begin());
    };
    for (TimeIndex t = 0; t < n; ++t)
      for (TrajId x = 0; x < trajs.size(); ++x) {
        bool rep = true;
        for (TrajId y = 0; y < x && rep; ++y) rep = !same_prefix(x, y, t);
        if (!rep) continue;
        for (DistId w = 0; w < omegas.size(); ++w) {
          SystemEntry e{.t = t, .x = x, .omega = w, .bundle = {}};
          for (TrajId h = 0; h < trajs.size(); ++h) {
            if (!same_prefix(h, x, t)) continue;
            bool ok = true;
            for (std::size_t i = t; i + 1 < n && ok; ++i) {
              const std::vector<std::size_t> prefix(trajs[h].begin(),
                                                    trajs[h].begin() + static_cast<std::ptrdiff_t>(i) + 1);
              const auto a = allowed(prefix, i, w);
              ok = std::binary_search(a.begin(), a.end(), trajs[h][i + 1]);
            }
            if (ok) e.bundle.push_back(h);
          }
          d.system.push_back(std::move(e));
        }
      }
    d.x0 = pick(rng, 0, trajs.size() - 1);

    // Prefix-closed constraint containing (t0, x0).
    std::bernoulli_distribution keep(cfg.constraint_density);
    for (TimeIndex t = 0; t < n; ++t)
      for (TrajId x = 0; x < trajs.size(); ++x) {
        bool rep = true;
        for (TrajId y = 0; y < x && rep; ++y) rep = !same_prefix(x, y, t);
        if (!rep) continue;
        const bool initial = t == d.time.t0_index && same_prefix(x, d.x0, t);
        if (initial || keep(rng))
          for (TrajId y = 0; y < trajs.size(); ++y)
            if (same_prefix(x, y, t)) d.constraint.emplace(t, y);
      }

    Instance inst(std::move(d));
    if (!validate_axioms(inst).ok()) continue;  // cannot happen for the product form

    if (std::bernoulli_distribution(0.3)(rng)) {
      for (int attempt = 0; attempt < 6; ++attempt) {
        InstanceData edited = inst.data();
        auto& e = edited.system[pick(rng, 0, edited.system.size() - 1)];
        const TrajId h = pick(rng, 0, edited.trajectories.size() - 1);
        auto it = std::lower_bound(e.bundle.begin(), e.bundle.end(), h);
        if (it != e.bundle.end() && *it == h)
          e.bundle.erase(it);
        else
          e.bundle.insert(it, h);
        Instance candidate(std::move(edited));
        if (validate_axioms(candidate).ok()) inst = std::move(candidate);
      }
    }
    return inst;
  }
}

/// Copy of `inst` with trajectories, disturbances and system entries permuted.
inline Instance shuffled(const Instance& inst, std::mt19937_64& rng) {
  const auto& src = inst.data();
  std::vector<TrajId> tperm(src.trajectories.size());
  std::iota(tperm.begin(), tperm.end(), 0);
  std::shuffle(tperm.begin(), tperm.end(), rng);  // old id -> new id
  std::vector<DistId> wperm(src.disturbances.size());
  std::iota(wperm.begin(), wperm.end(), 0);
  std::shuffle(wperm.begin(), wperm.end(), rng);

  InstanceData d = src;
  for (TrajId x = 0; x < tperm.size(); ++x) d.trajectories[tperm[x]] = src.trajectories[x];
  for (DistId w = 0; w < wperm.size(); ++w) d.disturbances[wperm[w]] = src.disturbances[w];
  for (auto& e : d.system) {
    e.x = tperm[e.x];
    e.omega = wperm[e.omega];
    for (auto& h : e.bundle) h = tperm[h];
    std::sort(e.bundle.begin(), e.bundle.end());
  }
  std::shuffle(d.system.begin(), d.system.end(), rng);
  d.constraint.clear();
  for (const auto& [t, x] : src.constraint) d.constraint.emplace(t, tperm[x]);
  d.x0 = tperm[src.x0];
  return Instance(std::move(d));
}

/// Id-free description of a state set: (time label, prefix values, disturbance values).
using SemanticState = std::tuple<int, std::vector<std::size_t>, std::vector<std::size_t>>;

inline std::set<SemanticState> semantic(const Instance& inst, const StateSet& set) {
  std::set<SemanticState> out;
  for (const auto& s : set) {
    const auto& v = inst.trajectory(s.x).values;
    out.emplace(inst.time().points[s.t],
                std::vector<std::size_t>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(s.t) + 1),
                inst.disturbance(s.omega).values);
  }
  return out;
}

/// Random subset of `base`; each member kept with probability `p`.
inline StateSet random_subset(const StateSet& base, std::mt19937_64& rng, double p = 0.5) {
  StateSet out;
  std::bernoulli_distribution keep(p);
  for (const auto& s : base)
    if (keep(rng)) out.insert(s);
  return out;
}

}  // namespace retention::testing

#endif  // RETENTION_TESTS_SUPPORT_HPP
