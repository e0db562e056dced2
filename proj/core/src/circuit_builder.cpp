#include "colcirc/circuit_builder.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "colcirc/catalog.hpp"
#include "colcirc/error.hpp"

namespace colcirc {

namespace {

const ElementType kU64 = ElementType::u(64);

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

}  // namespace

std::string CircuitBuilder::fresh_id(const std::string& base) {
  std::string stem = lower(base);
  for (;;) {
    std::string id = stem + std::to_string(counters_[stem]++);
    if (!circuit_.has_vertex(id)) return id;
  }
}

Wire CircuitBuilder::input(const std::string& label, const ElementType& type) {
  require(!inputs_.count(label), Errc::duplicate_id, "input '" + label + "' declared twice");
  inputs_.emplace(label, type);
  return Wire{"", label, type};
}

std::vector<Wire> CircuitBuilder::add(const std::string& op_name, json params,
                                      const std::vector<std::pair<std::string, Wire>>& connections,
                                      const std::string& id_hint) {
  auto op = make_op(op_name, params);
  std::string id = fresh_id(id_hint.empty() ? op_name : id_hint);
  circuit_.add_vertex(id, op);
  const auto& sig = op->signature();
  for (const auto& [port, wire] : connections) {
    const Port* p = sig.find_input(port);
    require(p != nullptr, Errc::invalid_argument, op_name + " has no input '" + port + "'");
    require(p->type == wire.type, Errc::type_mismatch,
            op_name + "." + port + " expects " + p->type.to_string() + ", wire carries " +
                wire.type.to_string());
    pending_.push_back({wire, PortRef{id, port}});
  }
  std::vector<Wire> outs;
  for (const auto& p : sig.outputs) outs.push_back(Wire{id, p.label, p.type});
  return outs;
}

Wire CircuitBuilder::add1(const std::string& op, json params,
                          const std::vector<std::pair<std::string, Wire>>& connections,
                          const std::string& id_hint) {
  return add(op, std::move(params), connections, id_hint).front();
}

void CircuitBuilder::output(const std::string& label, const Wire& w) {
  outputs_.emplace_back(label, w);
}

Circuit CircuitBuilder::build() const {
  Circuit c = circuit_;
  std::map<std::string, std::vector<PortRef>> uses;
  for (const auto& [label, t] : inputs_) uses[label];
  std::set<std::string> routed_to_output;
  for (const auto& [label, w] : outputs_) {
    if (w.is_input()) routed_to_output.insert(w.port);
  }
  for (const auto& pend : pending_) {
    if (pend.source.is_input()) uses[pend.source.port].push_back(pend.target);
  }
  // Inputs needing a relay vertex.
  std::map<std::string, PortRef> relay;
  for (const auto& [label, targets] : uses) {
    if (targets.size() == 1 && !routed_to_output.count(label)) {
      c.set_input(label, targets.front());
      continue;
    }
    std::string id = "in_" + label;
    for (int k = 2; c.has_vertex(id); ++k) id = "in_" + label + "_" + std::to_string(k);
    c.add_vertex(id, make_op("NoOp", json{{"type", inputs_.at(label).to_string()}}));
    c.set_input(label, PortRef{id, "col"});
    relay[label] = PortRef{id, "res"};
  }
  for (const auto& pend : pending_) {
    if (pend.source.is_input()) {
      auto it = relay.find(pend.source.port);
      if (it != relay.end()) c.add_edge(it->second, pend.target);
    } else {
      c.add_edge(PortRef{pend.source.vertex, pend.source.port}, pend.target);
    }
  }
  for (const auto& [label, w] : outputs_) {
    c.set_output(label, w.is_input() ? relay.at(w.port) : PortRef{w.vertex, w.port});
  }
  return c;
}

Wire CircuitBuilder::constant(const ElementType& type, json value) {
  return add1("Scalar", json{{"type", type.to_string()}, {"value", std::move(value)}}, {}, "scalar");
}

Wire CircuitBuilder::noop(const Wire& w) {
  return add1("NoOp", json{{"type", w.type.to_string()}}, {{"col", w}});
}

Wire CircuitBuilder::ew(const std::string& fn, const std::vector<Wire>& args, json extra) {
  require(!args.empty(), Errc::invalid_argument, "elementwise needs arguments");
  json params = extra.is_object() ? extra : json::object();
  params["fn"] = fn;
  if (!params.contains("type")) params["type"] = args.back().type.to_string();
  std::vector<std::pair<std::string, Wire>> conn;
  if (fn == "if_else") {
    conn = {{"cond", args[0]}, {"lhs", args[1]}, {"rhs", args[2]}};
  } else if (args.size() == 1) {
    conn = {{"col", args[0]}};
  } else {
    conn = {{"lhs", args[0]}, {"rhs", args[1]}};
  }
  return add1("Elementwise", params, conn, fn);
}

Wire CircuitBuilder::ew_const(const std::string& fn, const Wire& a, json constant) {
  return ew(fn, {a}, json{{"constant", std::move(constant)}});
}

Wire CircuitBuilder::cast(const Wire& w, const ElementType& to) {
  if (w.type == to) return w;
  return ew("cast", {w}, json{{"out_type", to.to_string()}});
}

Wire CircuitBuilder::length(const Wire& col, const ElementType& out) {
  return add1("Length", json{{"type", col.type.to_string()}, {"out_type", out.to_string()}},
              {{"column", col}});
}

Wire CircuitBuilder::replicate(const Wire& value, const Wire& count) {
  return add1("Replicate",
              json{{"type", value.type.to_string()}, {"length_type", count.type.to_string()}},
              {{"val", value}, {"length", count}});
}

Wire CircuitBuilder::iota(const Wire& count, const ElementType& type) {
  return add1("Iota", json{{"type", type.to_string()}, {"length_type", count.type.to_string()}},
              {{"length", count}});
}

Wire CircuitBuilder::gather(const Wire& pos, const Wire& data) {
  return add1("Gather", json{{"type", data.type.to_string()}, {"pos_type", pos.type.to_string()}},
              {{"pos", pos}, {"data", data}});
}

Wire CircuitBuilder::scatter(const Wire& col, const Wire& pos, const Wire& data) {
  return add1("Scatter", json{{"type", col.type.to_string()}, {"pos_type", pos.type.to_string()}},
              {{"col", col}, {"pos", pos}, {"data", data}});
}

Wire CircuitBuilder::permute(const Wire& pos, const Wire& data) {
  return add1("Permute", json{{"type", data.type.to_string()}, {"pos_type", pos.type.to_string()}},
              {{"pos", pos}, {"data", data}});
}

Wire CircuitBuilder::select(const Wire& data, const Wire& selection) {
  return add1("Select", json{{"type", data.type.to_string()}},
              {{"data", data}, {"selection", selection}});
}

Wire CircuitBuilder::select_indices(const Wire& selection, const ElementType& type) {
  return add1("SelectIndices", json{{"type", type.to_string()}}, {{"selection", selection}});
}

Wire CircuitBuilder::concat(const std::vector<Wire>& parts) {
  require(!parts.empty(), Errc::invalid_argument, "concat of nothing");
  std::vector<std::pair<std::string, Wire>> conn;
  for (std::size_t k = 0; k < parts.size(); ++k) conn.emplace_back("c" + std::to_string(k), parts[k]);
  return add1("Concatenate",
              json{{"type", parts.front().type.to_string()}, {"k", static_cast<int>(parts.size())}},
              conn);
}

Wire CircuitBuilder::prefix(const Wire& col, const std::string& fn, bool inclusive,
                            const ElementType& out_type) {
  return add1("PrefixAggregate",
              json{{"type", col.type.to_string()},
                   {"out_type", out_type.to_string()},
                   {"fn", fn},
                   {"mode", inclusive ? "inclusive" : "exclusive"}},
              {{"col", col}}, inclusive ? "prefix" : "exprefix");
}

Wire CircuitBuilder::last(const Wire& col) {
  return add1("Last", json{{"type", col.type.to_string()}}, {{"col", col}});
}

Wire CircuitBuilder::derivative(const Wire& col) {
  return add1("Derivative", json{{"type", col.type.to_string()}}, {{"col", col}});
}

std::pair<Wire, Wire> CircuitBuilder::split_first(const Wire& col) {
  auto outs = add("SplitFirst", json{{"type", col.type.to_string()}}, {{"col", col}});
  return {outs[0], outs[1]};
}

Wire CircuitBuilder::zip(const std::vector<Wire>& parts) {
  json types = json::array();
  std::vector<std::pair<std::string, Wire>> conn;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    types.push_back(parts[k].type.to_string());
    conn.emplace_back("c" + std::to_string(k), parts[k]);
  }
  return add1("Zip", json{{"types", types}}, conn);
}

std::vector<Wire> CircuitBuilder::unzip(const Wire& col) {
  json types = json::array();
  for (const auto& t : col.type.components()) types.push_back(t.to_string());
  return add("Unzip", json{{"types", types}}, {{"col", col}});
}

Wire CircuitBuilder::is_same_as_previous(const Wire& col) {
  return add1("IsSameAsPrevious", json{{"type", col.type.to_string()}}, {{"col", col}});
}

Wire CircuitBuilder::sum(const Wire& col, const ElementType& type) {
  Wire zero = constant(type, 0);
  Wire widened = cast(col, type);
  Wire padded = concat({zero, widened});
  return last(prefix(padded, "add", true, type));
}

Wire CircuitBuilder::expand_runs(const Wire& lengths) {
  Wire len64 = cast(lengths, kU64);
  Wire nonempty = ew_const("ne", len64, 0);
  Wire kept = select(len64, nonempty);
  Wire total = sum(kept, kU64);
  Wire starts = prefix(kept, "add", false, kU64);
  Wire zero = constant(kU64, 0);
  Wire one = constant(kU64, 1);
  Wire canvas = replicate(zero, total);
  Wire marks = scatter(canvas, starts, replicate(one, length(kept)));
  Wire ordinal = prefix(marks, "add", true, kU64);
  // Ordinal among nonempty runs, then back to the original run index.
  Wire among = ew_const("sub", ordinal, 1);
  Wire original = select_indices(nonempty);
  return gather(among, original);
}

Wire CircuitBuilder::if_else(const Wire& cond, const Wire& a, const Wire& b) {
  return ew("if_else", {cond, a, b});
}

}  // namespace colcirc
