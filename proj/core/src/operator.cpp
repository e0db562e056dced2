#include "colcirc/operator.hpp"

#include <set>

#include "colcirc/error.hpp"

namespace colcirc {

namespace {

int index_of(const std::vector<Port>& ports, const std::string& label) {
  for (std::size_t k = 0; k < ports.size(); ++k) {
    if (ports[k].label == label) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

int Signature::input_index(const std::string& label) const { return index_of(inputs, label); }
int Signature::output_index(const std::string& label) const { return index_of(outputs, label); }

const Port* Signature::find_input(const std::string& label) const {
  int k = input_index(label);
  return k < 0 ? nullptr : &inputs[static_cast<std::size_t>(k)];
}

const Port* Signature::find_output(const std::string& label) const {
  int k = output_index(label);
  return k < 0 ? nullptr : &outputs[static_cast<std::size_t>(k)];
}

void Signature::check() const {
  std::set<std::string> seen;
  for (const auto* side : {&inputs, &outputs}) {
    for (const auto& p : *side) {
      require(!p.label.empty() && p.label.find('.') == std::string::npos, Errc::invalid_argument,
              "port label '" + p.label + "' must be non-empty and free of '.'");
      require(seen.insert(p.label).second, Errc::invalid_argument,
              "duplicate signature label '" + p.label + "'");
    }
  }
}

json Signature::to_json() const {
  json in = json::object();
  json out = json::object();
  for (const auto& p : inputs) in[p.label] = p.type.to_string();
  for (const auto& p : outputs) out[p.label] = p.type.to_string();
  return json{{"inputs", in}, {"outputs", out}};
}

Operator::Operator(std::string name, json params, Signature signature)
    : name_(std::move(name)), params_(std::move(params)), signature_(std::move(signature)) {
  signature_.check();
}

std::vector<Column> Operator::evaluate(const std::vector<Column>& inputs) const {
  const auto& sig = signature_;
  require(inputs.size() == sig.inputs.size(), Errc::missing_input,
          name_ + ": expected " + std::to_string(sig.inputs.size()) + " inputs, got " +
              std::to_string(inputs.size()));
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].type() != sig.inputs[k].type) {
      throw Error(Errc::type_mismatch, name_ + ": input '" + sig.inputs[k].label + "' expects " +
                                           sig.inputs[k].type.to_string() + ", got " +
                                           inputs[k].type().to_string());
    }
  }
  auto outputs = apply(inputs);
  require(outputs.size() == sig.outputs.size(), Errc::invalid_argument,
          name_ + ": produced wrong number of outputs");
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    if (outputs[k].type() != sig.outputs[k].type) {
      throw Error(Errc::type_mismatch, name_ + ": output '" + sig.outputs[k].label +
                                           "' produced " + outputs[k].type().to_string() +
                                           ", declared " + sig.outputs[k].type.to_string());
    }
  }
  return outputs;
}

OperatorPtr make_lambda_op(std::string name, json params, Signature signature, OperatorFn fn) {
  return std::make_shared<LambdaOperator>(std::move(name), std::move(params),
                                          std::move(signature), std::move(fn));
}

ElementType param_type(const json& params, const char* key) {
  require(params.is_object() && params.contains(key) && params[key].is_string(),
          Errc::invalid_argument, std::string("missing type parameter '") + key + "'");
  return ElementType::parse(params[key].get<std::string>());
}

ElementType param_type_or(const json& params, const char* key, const ElementType& fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  return param_type(params, key);
}

std::int64_t param_int(const json& params, const char* key) {
  require(params.is_object() && params.contains(key) && params[key].is_number_integer(),
          Errc::invalid_argument, std::string("missing integer parameter '") + key + "'");
  return params[key].get<std::int64_t>();
}

std::int64_t param_int_or(const json& params, const char* key, std::int64_t fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  return param_int(params, key);
}

std::string param_string(const json& params, const char* key) {
  require(params.is_object() && params.contains(key) && params[key].is_string(),
          Errc::invalid_argument, std::string("missing string parameter '") + key + "'");
  return params[key].get<std::string>();
}

i128 scalar_int(const Column& col, const char* what) {
  require(col.size() == 1, Errc::length_mismatch,
          std::string(what) + " must be a scalar, got length " + std::to_string(col.size()));
  require(col.type().is_exact(), Errc::type_mismatch,
          std::string(what) + " must be an integer scalar");
  return col.integer(0);
}

std::uint64_t scalar_index(const Column& col, const char* what) {
  i128 v = scalar_int(col, what);
  require(v >= 0, Errc::invalid_argument, std::string(what) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace colcirc
