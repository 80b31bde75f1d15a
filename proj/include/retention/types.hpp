#ifndef RETENTION_TYPES_HPP
#define RETENTION_TYPES_HPP

#include <compare>
#include <initializer_list>
#include <map>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace retention {

/// Index into the time grid (not the time label itself).
using TimeIndex = std::size_t;
/// Index into the trajectory list of an instance.
using TrajId = std::size_t;
/// Index into the disturbance list of an instance.
using DistId = std::size_t;

/// Sorted, duplicate-free set of trajectory ids.
using TrajSet = std::vector<TrajId>;

/// A state (t, x, omega) of the controlled process.
///
/// `x` only matters through its prefix up to `t`; sets built by the library
/// always store the smallest trajectory id of that prefix class, so two
/// canonical states compare equal exactly when they denote the same class.
struct State {
  TimeIndex t = 0;
  TrajId x = 0;
  DistId omega = 0;

  friend auto operator<=>(const State&, const State&) = default;
};

/// Finite ordered set of canonical states.
class StateSet {
 public:
  using container_type = std::set<State>;
  using const_iterator = container_type::const_iterator;

  StateSet() = default;
  StateSet(std::initializer_list<State> init) : members_(init) {}
  template <class It>
  StateSet(It first, It last) : members_(first, last) {}

  bool insert(const State& s) { return members_.insert(s).second; }
  bool erase(const State& s) { return members_.erase(s) > 0; }
  [[nodiscard]] bool contains(const State& s) const { return members_.contains(s); }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }

  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }

  [[nodiscard]] bool is_subset_of(const StateSet& other) const {
    for (const auto& s : members_)
      if (!other.contains(s)) return false;
    return true;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

 private:
  container_type members_;
};

/// Multifunction from the disturbances compatible with `anchor` to trajectory sets.
struct Quasistrategy {
  State anchor;
  std::map<DistId, TrajSet> mapping;

  friend bool operator==(const Quasistrategy&, const Quasistrategy&) = default;
};

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance document.
class ParseError : public Error {
 public:
  enum class Kind { syntax, reference, arity, empty, duplicate };

  ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::syntax: return "syntax";
    case ParseError::Kind::reference: return "reference";
    case ParseError::Kind::arity: return "arity";
    case ParseError::Kind::empty: return "empty";
    case ParseError::Kind::duplicate: return "duplicate";
  }
  return "unknown";
}

/// A call violated a documented precondition (bad index, state outside sysp, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Lookup of a system entry that does not exist (instance is not total).
class MissingEntryError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A guaranteed property failed to hold; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// How set-valued passes over independent states are evaluated.
enum class Execution { sequential, parallel };

}  // namespace retention

#endif  // RETENTION_TYPES_HPP
