#include "colcirc/catalog.hpp"

#include <mutex>

#include "colcirc/error.hpp"
#include "colcirc/transform.hpp"

namespace colcirc {

OperatorCatalog& OperatorCatalog::global() {
  static OperatorCatalog* catalog = [] {
    auto* c = new OperatorCatalog();
    register_builtin_ops(*c);
    return c;
  }();
  return *catalog;
}

void OperatorCatalog::register_op(const std::string& name, Factory factory) {
  std::unique_lock lock(mutex_);
  require(!factories_.count(name), Errc::name_collision,
          "operator '" + name + "' already registered");
  factories_.emplace(name, std::move(factory));
}

bool OperatorCatalog::contains(const std::string& name) const {
  std::shared_lock lock(mutex_);
  return factories_.count(name) != 0;
}

OperatorPtr OperatorCatalog::make(const std::string& name, const json& params) const {
  Factory factory;
  {
    std::shared_lock lock(mutex_);
    auto it = factories_.find(name);
    if (it != factories_.end()) factory = it->second;
  }
  if (!factory) {
    if (params.is_object() && params.contains("fused_circuit")) {
      return make_fused_operator(name, params.at("fused_circuit"));
    }
    fail(Errc::unknown_operator, "unknown operator '" + name + "'");
  }
  return factory(params.is_null() ? json::object() : params);
}

std::vector<std::string> OperatorCatalog::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, f] : factories_) out.push_back(name);
  return out;
}

}  // namespace colcirc
