#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "colcirc/column.hpp"

namespace colcirc {

using json = nlohmann::json;

struct Port {
  std::string label;
  ElementType type;

  bool operator==(const Port&) const = default;
};

// Ordered input and output ports. Labels are unique across both sides and
// never contain '.'.
struct Signature {
  std::vector<Port> inputs;
  std::vector<Port> outputs;

  int input_index(const std::string& label) const;
  int output_index(const std::string& label) const;
  const Port* find_input(const std::string& label) const;
  const Port* find_output(const std::string& label) const;
  void check() const;  // throws on duplicate or malformed labels

  json to_json() const;
  bool operator==(const Signature&) const = default;
};

class Operator {
 public:
  Operator(std::string name, json params, Signature signature);
  virtual ~Operator() = default;

  const std::string& name() const { return name_; }
  const json& params() const { return params_; }
  const Signature& signature() const { return signature_; }

  // Inputs ordered as signature().inputs; checks types on the way in and out.
  std::vector<Column> evaluate(const std::vector<Column>& inputs) const;

  // Fused operators opt out of duplicate elimination.
  virtual bool dedupable() const { return true; }
  virtual json to_json_params() const { return params_; }

 protected:
  virtual std::vector<Column> apply(const std::vector<Column>& inputs) const = 0;

 private:
  std::string name_;
  json params_;
  Signature signature_;
};

using OperatorPtr = std::shared_ptr<const Operator>;
using OperatorFn = std::function<std::vector<Column>(const std::vector<Column>&)>;

// Operator defined by a closure; what most catalog factories produce.
class LambdaOperator : public Operator {
 public:
  LambdaOperator(std::string name, json params, Signature signature, OperatorFn fn)
      : Operator(std::move(name), std::move(params), std::move(signature)), fn_(std::move(fn)) {}

 protected:
  std::vector<Column> apply(const std::vector<Column>& inputs) const override {
    return fn_(inputs);
  }

 private:
  OperatorFn fn_;
};

OperatorPtr make_lambda_op(std::string name, json params, Signature signature, OperatorFn fn);

// Parameter helpers shared by operator factories.
ElementType param_type(const json& params, const char* key);
ElementType param_type_or(const json& params, const char* key, const ElementType& fallback);
std::int64_t param_int(const json& params, const char* key);
std::int64_t param_int_or(const json& params, const char* key, std::int64_t fallback);
std::string param_string(const json& params, const char* key);

// Requires a length-1 integer column; returns its value.
std::uint64_t scalar_index(const Column& col, const char* what);
i128 scalar_int(const Column& col, const char* what);

}  // namespace colcirc
