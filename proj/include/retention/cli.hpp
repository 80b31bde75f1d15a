#ifndef RETENTION_CLI_HPP
#define RETENTION_CLI_HPP

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "retention/oracle.hpp"
#include "retention/quasistrategy.hpp"
#include "retention/validate.hpp"

namespace retention::cli {

enum class Command { validate, solve, verify, decomposable };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::solve: return "solve";
    case Command::verify: return "verify";
    case Command::decomposable: return "decomposable";
  }
  return "unknown";
}

inline std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::validate, Command::solve, Command::verify, Command::decomposable})
    if (name == to_string(c)) return c;
  return std::nullopt;
}

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int parse_error = 2;
inline constexpr int budget_exceeded = 3;
inline constexpr int disagreement = 4;
}  // namespace exit_code

struct Options {
  bool close_constraint = false;
  std::uint64_t budget = default_enumeration_budget;
  bool all_states = false;
  Execution execution = Execution::sequential;
};

struct RunReport {
  Command command = Command::validate;
  std::string digest;
  nlohmann::json payload;
  int exit_code = exit_code::ok;
  /// One-line human summary for the diagnostic stream.
  std::string summary;

  /// Canonical output document. Contains no timing data.
  [[nodiscard]] nlohmann::json document() const {
    return {{"command", to_string(command)},
            {"instance_digest", digest},
            {"result", payload},
            {"exit_code", exit_code}};
  }
};

/// Hex SHA-256 of the instance text, prefixed with the algorithm name.
inline std::string content_digest(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

// JSON views of library objects. Times are emitted as grid labels, trajectories
// and disturbances as 0-based indices into the instance file arrays.

inline nlohmann::json to_json(const Instance& inst, const State& s) {
  return {{"t", inst.time().points[s.t]}, {"x", s.x}, {"omega", s.omega}};
}

inline nlohmann::json to_json(const Instance& inst, const StateSet& set) {
  auto out = nlohmann::json::array();
  for (const auto& s : set) out.push_back(to_json(inst, s));
  return out;
}

inline nlohmann::json to_json(const Instance& inst, const Quasistrategy& qs) {
  auto mapping = nlohmann::json::array();
  for (const auto& [nu, value] : qs.mapping) mapping.push_back({{"omega", nu}, {"bundle", value}});
  return {{"anchor", to_json(inst, qs.anchor)}, {"mapping", mapping}};
}

inline nlohmann::json to_json(const Instance& inst, const Violation& v) {
  nlohmann::json j{{"axiom", to_string(v.axiom)}};
  auto put = [&j](const char* key, const std::optional<std::size_t>& value) {
    if (value) j[key] = *value;
  };
  if (v.t) j["t"] = inst.time().points[*v.t];
  if (v.tau) j["tau"] = inst.time().points[*v.tau];
  put("x", v.x);
  put("x2", v.x2);
  put("h", v.h);
  put("h2", v.h2);
  put("omega", v.omega);
  put("omega2", v.omega2);
  return j;
}

inline nlohmann::json to_json(const Instance& inst, const ValidationReport& r) {
  auto violations = nlohmann::json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(inst, v));
  nlohmann::json counts = nlohmann::json::object();
  for (auto a : all_axioms)
    if (auto n = r.count(a)) counts[to_string(a)] = n;
  return {{"valid", r.ok()}, {"violations", violations}, {"counts", counts}};
}

namespace detail {

inline RunReport failure(Command c, std::string digest, int code, const std::string& kind,
                         const std::string& message) {
  RunReport r{.command = c, .digest = std::move(digest), .payload = {}, .exit_code = code, .summary = {}};
  r.payload = {{"error", {{"kind", kind}, {"message", message}}}};
  r.summary = std::string(to_string(c)) + ": " + kind + " error: " + message;
  return r;
}

inline RunReport solve(const Instance& inst, RunReport r, const Options& opt) {
  const auto sysp = reachable_states(inst);
  const auto target = target_set(inst);
  const auto kr = iterate_to_fixpoint(inst, target, opt.execution);
  const auto verdict = solvable(inst, kr);

  nlohmann::json v{{"solvable", verdict.solvable}};
  if (verdict.solvable) {
    v["omega0"] = *verdict.omega0;
    v["quasistrategy"] = to_json(inst, *verdict.strategy);
  }
  r.payload = {{"reachable_size", triple_count(inst, sysp)},
               {"reachable_classes", sysp.size()},
               {"target_size", triple_count(inst, target)},
               {"kernel", to_json(inst, kr.kernel)},
               {"kernel_size", triple_count(inst, kr.kernel)},
               {"trace", kr.trace},
               {"class_trace", kr.class_trace},
               {"iterations", kr.iterations},
               {"stable", kr.stable},
               {"verdict", v}};
  if (opt.all_states) {
    auto states = nlohmann::json::array();
    for (const auto& s : kr.kernel) {
      auto sizes = nlohmann::json::array();
      for (const auto& [nu, value] : build_quasistrategy(inst, kr.kernel, s).mapping)
        sizes.push_back({{"omega", nu}, {"size", value.size()}});
      states.push_back({{"state", to_json(inst, s)}, {"mapping_sizes", sizes}});
    }
    r.payload["kernel_strategies"] = states;
  }
  std::ostringstream msg;
  msg << "solve: kernel " << triple_count(inst, kr.kernel) << " of " << triple_count(inst, target)
      << " target states after " << kr.iterations << " iteration(s); "
      << (verdict.solvable ? "solvable with omega0 = " + std::to_string(*verdict.omega0)
                           : std::string("unsolvable"));
  r.summary = msg.str();
  return r;
}

inline RunReport verify(const Instance& inst, RunReport r, const Options& opt) {
  const auto kr = iterate_to_fixpoint(inst, target_set(inst), opt.execution);
  StateSet certified;
  try {
    certified = oracle_kernel(inst, opt.budget, opt.execution);
  } catch (const BudgetExceeded& e) {
    return failure(r.command, r.digest, exit_code::budget_exceeded, "budget", e.what());
  }
  const bool agree = certified == kr.kernel;
  r.payload = {{"fixpoint_kernel", to_json(inst, kr.kernel)},
               {"oracle_kernel", to_json(inst, certified)},
               {"agree", agree}};
  r.exit_code = agree ? exit_code::ok : exit_code::disagreement;
  r.summary = agree ? "verify: oracle and fixpoint kernels agree (" + std::to_string(kr.kernel.size()) +
                          " classes)"
                    : std::string("verify: kernels DISAGREE");
  return r;
}

inline RunReport decomposable(const Instance& inst, RunReport r) {
  const auto rep = is_decomposable(inst);
  r.payload = {{"decomposable", rep.decomposable}};
  if (rep.witness) {
    const auto& w = *rep.witness;
    const auto spliced = splice(inst, w.omega1, w.omega2, w.t);
    auto labels = nlohmann::json::array();
    for (auto v : spliced.values) labels.push_back(inst.data().disturbance_values[v]);
    r.payload["witness"] = {{"omega1", w.omega1},
                            {"omega2", w.omega2},
                            {"t", inst.time().points[w.t]},
                            {"splice", labels}};
  }
  r.summary = rep.decomposable ? "decomposable: yes" : "decomposable: no";
  return r;
}

}  // namespace detail

/// Runs one command on instance-file text.
inline RunReport run(Command command, std::string_view text, const Options& opt = {}) {
  RunReport r{.command = command, .digest = content_digest(text), .payload = {}, .exit_code = 0, .summary = {}};
  std::optional<Instance> parsed;
  try {
    parsed.emplace(parse_instance(text));
  } catch (const ParseError& e) {
    return detail::failure(command, r.digest, exit_code::parse_error, to_string(e.kind()), e.what());
  }
  if (command == Command::decomposable) return detail::decomposable(*parsed, std::move(r));

  const Instance inst = opt.close_constraint ? close_constraint(*parsed) : std::move(*parsed);
  const auto validation = validate_axioms(inst);
  if (command == Command::validate || !validation.ok()) {
    r.payload = to_json(inst, validation);
    r.exit_code = validation.ok() ? exit_code::ok : exit_code::invalid;
    r.summary = validation.ok() ? "validate: instance satisfies all axioms"
                                : "validate: " + std::to_string(validation.violations.size()) +
                                      " violation(s)";
    return r;
  }
  if (command == Command::solve) return detail::solve(inst, std::move(r), opt);
  return detail::verify(inst, std::move(r), opt);
}

/// Runs one command on an instance file. Unreadable files count as parse errors.
inline RunReport run_file(Command command, const std::string& path, const Options& opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return detail::failure(command, "", exit_code::parse_error, "io", "cannot read '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run(command, text, opt);
}

}  // namespace retention::cli

#endif  // RETENTION_CLI_HPP
