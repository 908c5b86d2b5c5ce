#ifndef SOLROB_MILP_BACKEND_HPP
#define SOLROB_MILP_BACKEND_HPP

#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/milp/branch_and_bound.hpp"
#include "solrob/milp/model.hpp"

namespace solrob::milp {

struct Capabilities {
  bool integer = true;
  bool exact_verification = true;
  bool time_limit = true;
};

/// A solver adapter. Results must follow MilpResult semantics.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual Capabilities capabilities() const = 0;
  /// Adapters wrapping an external program report false when it is missing.
  virtual bool available() const { return true; }
  virtual MilpResult solve(const MilpModel& model, const SolveBudget& budget) const = 0;
};

class ReferenceBackend final : public Backend {
 public:
  std::string name() const override { return "reference"; }
  Capabilities capabilities() const override { return {}; }
  MilpResult solve(const MilpModel& model, const SolveBudget& budget) const override {
    return solve_milp(model, budget);
  }
};

inline constexpr const char* kBackendEnv = "SOLROB_BACKEND";
inline constexpr const char* kReferenceBackend = "reference";

class BackendRegistry {
 public:
  /// Registry holding only the reference solver.
  static BackendRegistry with_defaults() {
    BackendRegistry r;
    r.add(std::make_shared<ReferenceBackend>());
    return r;
  }

  void add(std::shared_ptr<const Backend> backend) {
    const std::string key = backend->name();
    if (backends_.count(key)) throw ConfigError("backend '" + key + "' registered twice");
    backends_.emplace(key, std::move(backend));
  }

  const Backend& get(const std::string& name) const {
    auto it = backends_.find(name);
    if (it == backends_.end()) throw ConfigError("unknown backend '" + name + "'");
    if (!it->second->available()) throw ConfigError("backend '" + name + "' is not available");
    return *it->second;
  }

  /// Name from SOLROB_BACKEND if set and non-empty, else the reference solver.
  static std::string default_name() {
    const char* env = std::getenv(kBackendEnv);
    if (env && *env) return env;
    return kReferenceBackend;
  }

  const Backend& get_default() const { return get(default_name()); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : backends_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::shared_ptr<const Backend>> backends_;
};

/// Process-wide registry with the built-in backends.
inline const BackendRegistry& default_registry() {
  static const BackendRegistry registry = BackendRegistry::with_defaults();
  return registry;
}

inline const Backend& reference_backend() { return default_registry().get(kReferenceBackend); }

}  // namespace solrob::milp

#endif  // SOLROB_MILP_BACKEND_HPP
