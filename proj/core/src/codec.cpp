#include "colcirc/codec.hpp"

#include <mutex>

#include "colcirc/error.hpp"
#include "colcirc/transform.hpp"

namespace colcirc {

TypeMap types_of(const ColumnFamily& cols) {
  TypeMap out;
  for (const auto& [label, col] : cols) out.emplace(label, col.type());
  return out;
}

CodecRegistry& CodecRegistry::builtin() {
  static CodecRegistry* registry = [] {
    auto* r = new CodecRegistry();
    register_builtin_schemes(*r);
    return r;
  }();
  return *registry;
}

void CodecRegistry::register_codec(CodecEntry entry) {
  require(!entry.scheme_id.empty(), Errc::invalid_argument, "codec needs a scheme id");
  require(entry.build_decoder && entry.encode && entry.verify, Errc::invalid_argument,
          "codec '" + entry.scheme_id + "' lacks decoder, encoder or verifier");
  std::unique_lock lock(mutex_);
  require(!entries_.count(entry.scheme_id), Errc::duplicate_id,
          "scheme '" + entry.scheme_id + "' already registered");
  auto id = entry.scheme_id;
  entries_.emplace(id, std::make_shared<const CodecEntry>(std::move(entry)));
}

bool CodecRegistry::contains(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return entries_.count(id) != 0;
}

const CodecEntry& CodecRegistry::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(id);
  require(it != entries_.end(), Errc::unknown_scheme, "unknown scheme '" + id + "'");
  return *it->second;
}

std::vector<std::string> CodecRegistry::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : entries_) out.push_back(id);
  return out;
}

SchemeInstance encode(const std::string& scheme_id, const json& params, const ColumnFamily& input,
                      const CodecRegistry& registry) {
  const auto& entry = registry.find(scheme_id);
  json p = params.is_null() ? json::object() : params;
  require(p.is_object(), Errc::invalid_argument, "scheme params must be a JSON object");
  SchemeInstance inst = entry.encode(p, input);
  inst.scheme_id = scheme_id;
  return inst;
}

SchemeInstance encode(const std::string& scheme_id, const json& params, const Column& column,
                      const CodecRegistry& registry) {
  return encode(scheme_id, params, ColumnFamily{{kColumnLabel, column}}, registry);
}

VerifyResult verify(const SchemeInstance& inst, const CodecRegistry& registry) {
  const auto& entry = registry.find(inst.scheme_id);
  try {
    return entry.verify(inst.params, inst.columns);
  } catch (const std::exception& e) {
    return VerifyResult::reject(e.what());
  }
}

Circuit decoder_circuit(const SchemeInstance& inst, const CodecRegistry& registry) {
  return registry.find(inst.scheme_id).build_decoder(inst.params, types_of(inst.columns));
}

ColumnFamily decode(const SchemeInstance& inst, const CodecRegistry& registry,
                    const EvalOptions& options) {
  auto verdict = verify(inst, registry);
  if (!verdict) {
    fail(Errc::verification_failed,
         "scheme '" + inst.scheme_id + "' rejected encoded form: " + verdict.reason);
  }
  return evaluate_circuit(decoder_circuit(inst, registry), inst.columns, options);
}

Column decode_column(const SchemeInstance& inst, const CodecRegistry& registry) {
  auto out = decode(inst, registry);
  auto it = out.find(kColumnLabel);
  require(it != out.end(), Errc::invalid_argument,
          "scheme '" + inst.scheme_id + "' does not decode to a single column");
  return it->second;
}

Circuit verifier_circuit(const SchemeInstance& inst) {
  json types = json::object();
  for (const auto& [label, col] : inst.columns) types[label] = col.type().to_string();
  auto op = make_verify_operator(
      json{{"scheme", inst.scheme_id}, {"params", inst.params}, {"types", types}});
  return lift_operator(op, "verify");
}

ColumnFamily canonical_form(const std::string& scheme_id, const ColumnFamily& decoded,
                            const CodecRegistry& registry) {
  const auto& entry = registry.find(scheme_id);
  return entry.canonicalize ? entry.canonicalize(decoded) : decoded;
}

bool equivalent(const std::string& scheme_id, const ColumnFamily& a, const ColumnFamily& b,
                const CodecRegistry& registry) {
  return canonical_form(scheme_id, a, registry) == canonical_form(scheme_id, b, registry);
}

Ratio compression_ratio(const SchemeInstance& inst, const CodecRegistry& registry) {
  auto decoded = decode(inst, registry);
  return Ratio{representation_size_bytes(decoded), representation_size_bytes(inst.columns)};
}

OperatorPtr make_verify_operator(const json& params) {
  std::string scheme = param_string(params, "scheme");
  json scheme_params = params.value("params", json::object());
  require(params.contains("types") && params["types"].is_object(), Errc::invalid_argument,
          "Verify needs a 'types' object");
  Signature sig;
  for (const auto& [label, t] : params["types"].items()) {
    sig.inputs.push_back({label, ElementType::parse(t.get<std::string>())});
  }
  sig.outputs.push_back({"accept", ElementType::bit()});
  std::vector<std::string> labels;
  for (const auto& p : sig.inputs) labels.push_back(p.label);
  return make_lambda_op("Verify", params, sig,
                        [scheme, scheme_params, labels](const std::vector<Column>& args) {
                          SchemeInstance inst{scheme, scheme_params, {}};
                          for (std::size_t k = 0; k < labels.size(); ++k) {
                            inst.columns.emplace(labels[k], args[k]);
                          }
                          bool ok = verify(inst).accepted;
                          return std::vector<Column>{Column::from_bits({ok})};
                        });
}

Circuit prefix_labels(const Circuit& c, const std::string& prefix) {
  Circuit out;
  for (const auto& [id, op] : c.vertices()) out.add_vertex(prefix + id, op);
  auto p = [&](const PortRef& r) { return PortRef{prefix + r.vertex, r.port}; };
  for (const auto& e : c.edges()) out.add_edge(p(e.from), p(e.to));
  for (const auto& [label, port] : c.inputs()) out.set_input(prefix + label, p(port));
  for (const auto& [label, port] : c.outputs()) out.set_output(prefix + label, p(port));
  return out;
}

Circuit chain_circuits(const Circuit& outer, const Circuit& inner,
                       const std::map<std::string, std::string>& links) {
  for (const auto& [label, port] : inner.inputs()) {
    require(!outer.inputs().count(label) && !outer.outputs().count(label), Errc::name_collision,
            "chain: label '" + label + "' appears in both circuits");
  }
  for (const auto& [label, port] : inner.outputs()) {
    require(!outer.inputs().count(label) && !outer.outputs().count(label), Errc::name_collision,
            "chain: label '" + label + "' appears in both circuits");
  }
  Circuit u = circuit_union(outer, inner);
  std::set<std::string> consumed;
  for (const auto& [outer_in, inner_out] : links) {
    auto it = u.outputs().find(inner_out);
    require(it != u.outputs().end(), Errc::invalid_argument,
            "chain: inner circuit has no output '" + inner_out + "'");
    u = assign_input(u, outer_in, it->second);
    consumed.insert(inner_out);
  }
  for (const auto& label : consumed) u.remove_output(label);
  return u;
}

}  // namespace colcirc
