#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "colcirc/operator.hpp"

namespace colcirc {

// Registry of named operator factories. The global instance holds every
// builtin operator; fused operators are added at runtime.
class OperatorCatalog {
 public:
  using Factory = std::function<OperatorPtr(const json& params)>;

  static OperatorCatalog& global();

  void register_op(const std::string& name, Factory factory);
  bool contains(const std::string& name) const;
  // Builds an instance; a params object carrying "fused_circuit" rebuilds a
  // fused operator even when `name` is not registered in this process.
  OperatorPtr make(const std::string& name, const json& params = json::object()) const;
  std::vector<std::string> names() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Factory> factories_;
};

inline OperatorPtr make_op(const std::string& name, const json& params = json::object()) {
  return OperatorCatalog::global().make(name, params);
}

void register_builtin_ops(OperatorCatalog& catalog);

}  // namespace colcirc
