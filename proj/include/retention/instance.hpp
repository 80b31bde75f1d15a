#ifndef RETENTION_INSTANCE_HPP
#define RETENTION_INSTANCE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "retention/types.hpp"

namespace retention {

/// Finite time grid. Only the order of the labels is used.
struct TimeGrid {
  std::vector<int> points;
  TimeIndex t0_index = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] std::optional<TimeIndex> index_of(int label) const {
    auto it = std::lower_bound(points.begin(), points.end(), label);
    if (it == points.end() || *it != label) return std::nullopt;
    return static_cast<TimeIndex>(it - points.begin());
  }
};

/// Values are indices into the state alphabet, one per grid point.
struct Trajectory {
  std::vector<std::size_t> values;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Values are indices into the disturbance alphabet, one per grid point.
struct Disturbance {
  std::vector<std::size_t> values;
  friend bool operator==(const Disturbance&, const Disturbance&) = default;
};

/// One extensional entry of the system map: S(t, x, omega) = bundle.
struct SystemEntry {
  TimeIndex t = 0;
  TrajId x = 0;
  DistId omega = 0;
  TrajSet bundle;
};

using ConstraintSet = std::set<std::pair<TimeIndex, TrajId>>;

/// Raw instance contents, before any derived tables are built.
struct InstanceData {
  TimeGrid time;
  std::vector<nlohmann::json> states;
  std::vector<Trajectory> trajectories;
  std::vector<nlohmann::json> disturbance_values;
  std::vector<Disturbance> disturbances;
  std::vector<SystemEntry> system;
  ConstraintSet constraint;
  TrajId x0 = 0;
};

/// A structurally resolved finite retention problem.
///
/// Construction checks references, arities and nonemptiness, and builds the
/// prefix-class tables. It does not check the system axioms; see
/// validate_axioms(). Instances are immutable once built.
class Instance {
 public:
  explicit Instance(InstanceData data) : data_(std::move(data)) {
    check_structure();
    build_tables();
  }

  [[nodiscard]] const InstanceData& data() const { return data_; }
  [[nodiscard]] const TimeGrid& time() const { return data_.time; }
  [[nodiscard]] TimeIndex t0() const { return data_.time.t0_index; }
  [[nodiscard]] TrajId x0() const { return data_.x0; }
  [[nodiscard]] std::size_t num_times() const { return data_.time.size(); }
  [[nodiscard]] std::size_t num_trajectories() const { return data_.trajectories.size(); }
  [[nodiscard]] std::size_t num_disturbances() const { return data_.disturbances.size(); }
  [[nodiscard]] const Trajectory& trajectory(TrajId x) const { return data_.trajectories.at(x); }
  [[nodiscard]] const Disturbance& disturbance(DistId w) const { return data_.disturbances.at(w); }
  [[nodiscard]] const std::vector<SystemEntry>& system() const { return data_.system; }
  [[nodiscard]] const ConstraintSet& constraint() const { return data_.constraint; }

  /// Smallest trajectory id agreeing with `x` at every grid point up to `t`.
  [[nodiscard]] TrajId canonical(TimeIndex t, TrajId x) const { return canon_[t][x]; }
  [[nodiscard]] State canonical(const State& s) const { return {s.t, canonical(s.t, s.x), s.omega}; }
  [[nodiscard]] bool is_canonical(const State& s) const {
    return s.t < num_times() && s.x < num_trajectories() && s.omega < num_disturbances() &&
           canonical(s.t, s.x) == s.x;
  }
  /// Number of trajectories in the prefix class of `x` at `t`.
  [[nodiscard]] std::size_t class_size(TimeIndex t, TrajId x) const {
    return class_size_[t][canonical(t, x)];
  }
  /// Trajectory ids in the prefix class of `x` at `t`, ascending.
  [[nodiscard]] TrajSet prefix_class(TimeIndex t, TrajId x) const {
    TrajSet out;
    const TrajId rep = canonical(t, x);
    for (TrajId y = rep; y < num_trajectories(); ++y)
      if (canon_[t][y] == rep) out.push_back(y);
    return out;
  }

  /// Entry for the class of `x` at `t`, or nullptr when the map is not total there.
  [[nodiscard]] const TrajSet* find_bundle(TimeIndex t, TrajId x, DistId omega) const {
    const auto slot = table_[key(t, canonical(t, x), omega)];
    return slot < 0 ? nullptr : &data_.system[static_cast<std::size_t>(slot)].bundle;
  }

  [[nodiscard]] bool in_constraint(TimeIndex t, TrajId x) const {
    return data_.constraint.contains({t, x});
  }

 private:
  void check_structure() const {
    using K = ParseError::Kind;
    const auto& d = data_;
    if (d.time.points.empty()) throw ParseError(K::empty, "time grid is empty");
    for (std::size_t i = 1; i < d.time.points.size(); ++i)
      if (d.time.points[i - 1] >= d.time.points[i])
        throw ParseError(K::syntax, "time points must be strictly increasing");
    if (d.time.t0_index >= d.time.size()) throw ParseError(K::reference, "t0 is not a grid point");
    if (d.states.empty()) throw ParseError(K::empty, "state alphabet is empty");
    if (d.disturbance_values.empty()) throw ParseError(K::empty, "disturbance alphabet is empty");
    if (d.trajectories.empty()) throw ParseError(K::empty, "trajectory set is empty");
    if (d.disturbances.empty()) throw ParseError(K::empty, "disturbance set is empty");

    const std::size_t n = d.time.size();
    for (std::size_t i = 0; i < d.trajectories.size(); ++i) {
      const auto& v = d.trajectories[i].values;
      if (v.size() != n)
        throw ParseError(K::arity, "trajectory " + std::to_string(i) + " has length " +
                                       std::to_string(v.size()) + ", grid has " + std::to_string(n));
      for (auto label : v)
        if (label >= d.states.size())
          throw ParseError(K::reference, "trajectory " + std::to_string(i) + " uses an unknown state");
      for (std::size_t j = 0; j < i; ++j)
        if (d.trajectories[j] == d.trajectories[i])
          throw ParseError(K::duplicate, "trajectories " + std::to_string(j) + " and " +
                                             std::to_string(i) + " coincide");
    }
    for (std::size_t i = 0; i < d.disturbances.size(); ++i) {
      const auto& v = d.disturbances[i].values;
      if (v.size() != n)
        throw ParseError(K::arity, "disturbance " + std::to_string(i) + " has length " +
                                       std::to_string(v.size()) + ", grid has " + std::to_string(n));
      for (auto label : v)
        if (label >= d.disturbance_values.size())
          throw ParseError(K::reference,
                           "disturbance " + std::to_string(i) + " uses an unknown value");
      for (std::size_t j = 0; j < i; ++j)
        if (d.disturbances[j] == d.disturbances[i])
          throw ParseError(K::duplicate, "disturbances " + std::to_string(j) + " and " +
                                             std::to_string(i) + " coincide");
    }

    const auto nc = d.trajectories.size();
    for (const auto& e : d.system) {
      if (e.t >= n) throw ParseError(K::reference, "system entry time is not a grid point");
      if (e.x >= nc)
        throw ParseError(K::reference, "system entry references trajectory " + std::to_string(e.x) +
                                           " of " + std::to_string(nc));
      if (e.omega >= d.disturbances.size())
        throw ParseError(K::reference, "system entry references disturbance " +
                                           std::to_string(e.omega));
      for (std::size_t i = 0; i < e.bundle.size(); ++i) {
        if (e.bundle[i] >= nc)
          throw ParseError(K::reference, "bundle references trajectory " +
                                             std::to_string(e.bundle[i]) + " of " + std::to_string(nc));
        if (i > 0 && e.bundle[i - 1] >= e.bundle[i])
          throw ParseError(K::duplicate, "bundle ids must be sorted and distinct");
      }
    }
    for (const auto& [t, x] : d.constraint) {
      if (t >= n) throw ParseError(K::reference, "constraint time is not a grid point");
      if (x >= nc)
        throw ParseError(K::reference, "constraint references trajectory " + std::to_string(x) +
                                           " of " + std::to_string(nc));
    }
    if (d.x0 >= nc)
      throw ParseError(K::reference, "x0 references trajectory " + std::to_string(d.x0) + " of " +
                                         std::to_string(nc));
  }

  void build_tables() {
    const std::size_t n = num_times();
    const std::size_t nc = num_trajectories();
    canon_.assign(n, std::vector<TrajId>(nc));
    class_size_.assign(n, std::vector<std::size_t>(nc, 0));
    for (TimeIndex t = 0; t < n; ++t) {
      for (TrajId x = 0; x < nc; ++x) {
        const auto& vx = data_.trajectories[x].values;
        TrajId rep = x;
        for (TrajId y = 0; y < x; ++y) {
          const auto& vy = data_.trajectories[y].values;
          if (std::equal(vx.begin(), vx.begin() + static_cast<std::ptrdiff_t>(t) + 1, vy.begin())) {
            rep = y;
            break;
          }
        }
        canon_[t][x] = rep;
        ++class_size_[t][rep];
      }
    }
    // The entry keyed by the class representative wins; otherwise the first one seen.
    table_.assign(n * nc * num_disturbances(), -1);
    for (std::size_t i = 0; i < data_.system.size(); ++i) {
      const auto& e = data_.system[i];
      auto& slot = table_[key(e.t, canonical(e.t, e.x), e.omega)];
      if (slot < 0 || (e.x == canonical(e.t, e.x) &&
                       data_.system[static_cast<std::size_t>(slot)].x != e.x))
        slot = static_cast<std::int64_t>(i);
    }
  }

  [[nodiscard]] std::size_t key(TimeIndex t, TrajId x, DistId w) const {
    return (t * num_trajectories() + x) * num_disturbances() + w;
  }

  InstanceData data_;
  std::vector<std::vector<TrajId>> canon_;
  std::vector<std::vector<std::size_t>> class_size_;
  std::vector<std::int64_t> table_;
};

/// True iff `x` and `x2` agree at every grid point up to index `t`.
inline bool prefix_equal(const Instance& inst, TrajId x, TrajId x2, TimeIndex t) {
  if (x >= inst.num_trajectories() || x2 >= inst.num_trajectories() || t >= inst.num_times())
    throw PreconditionError("prefix_equal: index out of range");
  return inst.canonical(t, x) == inst.canonical(t, x2);
}

/// S(t, x, omega), looked up through the prefix-class representative of `x`.
inline const TrajSet& bundle(const Instance& inst, TimeIndex t, TrajId x, DistId omega) {
  if (t >= inst.num_times() || x >= inst.num_trajectories() || omega >= inst.num_disturbances())
    throw PreconditionError("bundle: index out of range");
  const auto* b = inst.find_bundle(t, x, omega);
  if (b == nullptr)
    throw MissingEntryError("no system entry for (t=" + std::to_string(inst.time().points[t]) +
                            ", x=" + std::to_string(x) + ", omega=" + std::to_string(omega) + ")");
  return *b;
}

/// Sorted prefix-class representatives of the members of `trajs` at time `t`.
/// Two trajectory sets have equal restrictions to the prefix up to `t` iff these coincide.
inline TrajSet prefix_set(const Instance& inst, const TrajSet& trajs, TimeIndex t) {
  TrajSet out;
  out.reserve(trajs.size());
  for (auto h : trajs) out.push_back(inst.canonical(t, h));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& doc, std::string_view field) {
  auto it = doc.find(field);
  if (it == doc.end())
    throw ParseError(ParseError::Kind::syntax, "missing field '" + std::string(field) + "'");
  return *it;
}

inline const nlohmann::json& require_array(const nlohmann::json& doc, std::string_view field) {
  const auto& v = require(doc, field);
  if (!v.is_array())
    throw ParseError(ParseError::Kind::syntax, "field '" + std::string(field) + "' must be an array");
  return v;
}

inline std::int64_t as_int(const nlohmann::json& v, std::string_view what) {
  if (!v.is_number_integer())
    throw ParseError(ParseError::Kind::syntax, std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

inline std::size_t as_index(const nlohmann::json& v, std::string_view what) {
  const auto i = as_int(v, what);
  if (i < 0) throw ParseError(ParseError::Kind::reference, std::string(what) + " is negative");
  return static_cast<std::size_t>(i);
}

inline std::vector<nlohmann::json> labels(const nlohmann::json& doc, std::string_view field) {
  std::vector<nlohmann::json> out;
  for (const auto& v : require_array(doc, field)) {
    if (!v.is_primitive() || v.is_null())
      throw ParseError(ParseError::Kind::syntax, "labels in '" + std::string(field) + "' must be scalars");
    if (std::find(out.begin(), out.end(), v) != out.end())
      throw ParseError(ParseError::Kind::duplicate, "duplicate label in '" + std::string(field) + "'");
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::size_t> encode(const nlohmann::json& seq,
                                       const std::vector<nlohmann::json>& alphabet,
                                       std::string_view what) {
  if (!seq.is_array())
    throw ParseError(ParseError::Kind::syntax, std::string(what) + " must be an array of labels");
  std::vector<std::size_t> out;
  for (const auto& v : seq) {
    auto it = std::find(alphabet.begin(), alphabet.end(), v);
    if (it == alphabet.end())
      throw ParseError(ParseError::Kind::reference, std::string(what) + " uses undeclared label " + v.dump());
    out.push_back(static_cast<std::size_t>(it - alphabet.begin()));
  }
  return out;
}

inline TimeIndex time_ref(const TimeGrid& grid, const nlohmann::json& v, std::string_view what) {
  const auto label = as_int(v, what);
  if (label < INT32_MIN || label > INT32_MAX)
    throw ParseError(ParseError::Kind::reference, std::string(what) + " is not a grid point");
  auto idx = grid.index_of(static_cast<int>(label));
  if (!idx) throw ParseError(ParseError::Kind::reference, std::string(what) + " is not a grid point");
  return *idx;
}

}  // namespace detail

/// Builds an Instance from a parsed instance document.
inline Instance parse_instance(const nlohmann::json& doc) {
  using detail::as_index;
  using detail::as_int;
  using detail::require;
  using detail::require_array;
  if (!doc.is_object()) throw ParseError(ParseError::Kind::syntax, "instance must be an object");

  InstanceData d;
  for (const auto& p : require_array(doc, "times")) {
    const auto v = as_int(p, "time point");
    if (v < INT32_MIN || v > INT32_MAX) throw ParseError(ParseError::Kind::syntax, "time point out of range");
    d.time.points.push_back(static_cast<int>(v));
  }
  if (d.time.points.empty()) throw ParseError(ParseError::Kind::empty, "time grid is empty");
  if (!std::is_sorted(d.time.points.begin(), d.time.points.end()) ||
      std::adjacent_find(d.time.points.begin(), d.time.points.end()) != d.time.points.end())
    throw ParseError(ParseError::Kind::syntax, "time points must be strictly increasing");
  d.time.t0_index = detail::time_ref(d.time, require(doc, "t0"), "t0");

  d.states = detail::labels(doc, "states");
  d.disturbance_values = detail::labels(doc, "disturbance_values");
  for (const auto& seq : require_array(doc, "trajectories"))
    d.trajectories.push_back({detail::encode(seq, d.states, "trajectory")});
  for (const auto& seq : require_array(doc, "disturbances"))
    d.disturbances.push_back({detail::encode(seq, d.disturbance_values, "disturbance")});

  for (const auto& e : require_array(doc, "system")) {
    if (!e.is_object()) throw ParseError(ParseError::Kind::syntax, "system entry must be an object");
    SystemEntry entry;
    entry.t = detail::time_ref(d.time, require(e, "t"), "system entry time");
    entry.x = as_index(require(e, "x"), "system entry x");
    entry.omega = as_index(require(e, "omega"), "system entry omega");
    for (const auto& h : require_array(e, "bundle")) entry.bundle.push_back(as_index(h, "bundle member"));
    std::sort(entry.bundle.begin(), entry.bundle.end());
    if (std::adjacent_find(entry.bundle.begin(), entry.bundle.end()) != entry.bundle.end())
      throw ParseError(ParseError::Kind::duplicate, "bundle lists a trajectory twice");
    d.system.push_back(std::move(entry));
  }
  for (const auto& c : require_array(doc, "constraint")) {
    if (!c.is_object()) throw ParseError(ParseError::Kind::syntax, "constraint entry must be an object");
    d.constraint.emplace(detail::time_ref(d.time, require(c, "t"), "constraint time"),
                         as_index(require(c, "x"), "constraint x"));
  }
  d.x0 = as_index(require(doc, "x0"), "x0");
  return Instance(std::move(d));
}

/// Parses instance-file text.
inline Instance parse_instance(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseError::Kind::syntax, e.what());
  }
  return parse_instance(doc);
}

inline Instance parse_instance(const std::string& text) { return parse_instance(std::string_view(text)); }
inline Instance parse_instance(const char* text) { return parse_instance(std::string_view(text)); }

/// Inverse of parse_instance: serializes to the instance-file schema.
inline nlohmann::json to_json(const Instance& inst) {
  const auto& d = inst.data();
  nlohmann::json doc;
  doc["times"] = d.time.points;
  doc["t0"] = d.time.points[d.time.t0_index];
  doc["states"] = d.states;
  auto decode = [](const std::vector<std::size_t>& v, const std::vector<nlohmann::json>& alphabet) {
    nlohmann::json seq = nlohmann::json::array();
    for (auto i : v) seq.push_back(alphabet[i]);
    return seq;
  };
  doc["trajectories"] = nlohmann::json::array();
  for (const auto& tr : d.trajectories) doc["trajectories"].push_back(decode(tr.values, d.states));
  doc["disturbance_values"] = d.disturbance_values;
  doc["disturbances"] = nlohmann::json::array();
  for (const auto& w : d.disturbances)
    doc["disturbances"].push_back(decode(w.values, d.disturbance_values));
  doc["system"] = nlohmann::json::array();
  for (const auto& e : d.system)
    doc["system"].push_back(
        {{"t", d.time.points[e.t]}, {"x", e.x}, {"omega", e.omega}, {"bundle", e.bundle}});
  doc["constraint"] = nlohmann::json::array();
  for (const auto& [t, x] : d.constraint) doc["constraint"].push_back({{"t", d.time.points[t]}, {"x", x}});
  doc["x0"] = d.x0;
  return doc;
}

}  // namespace retention

#endif  // RETENTION_INSTANCE_HPP
