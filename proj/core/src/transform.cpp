#include "colcirc/transform.hpp"

#include <deque>

#include "colcirc/error.hpp"

namespace colcirc {

namespace {

class FusedOperator : public Operator {
 public:
  FusedOperator(std::string name, Circuit inner)
      : Operator(std::move(name), json{{"fused_circuit", circuit_to_json(inner)}},
                 inner.signature()),
        inner_(std::move(inner)) {
    require_valid(inner_);
  }

  bool dedupable() const override { return false; }

 protected:
  std::vector<Column> apply(const std::vector<Column>& inputs) const override {
    const auto& sig = signature();
    ColumnFamily named;
    for (std::size_t k = 0; k < inputs.size(); ++k) named.emplace(sig.inputs[k].label, inputs[k]);
    EvalOptions opts;
    opts.skip_validation = true;
    auto out = evaluate_circuit(inner_, named, opts);
    std::vector<Column> ordered;
    for (const auto& p : sig.outputs) ordered.push_back(out.at(p.label));
    return ordered;
  }

 private:
  Circuit inner_;
};

std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken) {
  if (!taken(base)) return base;
  for (int k = 2;; ++k) {
    std::string candidate = base + "#" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

// Induced subcircuit plus the bookkeeping replacement needs.
struct Induced {
  Circuit circuit;
  std::map<std::string, PortRef> cut_input_source;              // label -> outside out-port
  std::map<std::string, std::vector<PortRef>> cut_output_targets;  // label -> outside in-ports
};

Induced induce(const Circuit& c, const std::set<std::string>& ids) {
  for (const auto& id : ids) {
    require(c.has_vertex(id), Errc::invalid_argument, "vertex '" + id + "' not in circuit");
  }
  Induced r;
  for (const auto& id : ids) r.circuit.add_vertex(id, c.op(id));
  for (const auto& [label, port] : c.inputs()) {
    if (ids.count(port.vertex)) r.circuit.set_input(label, port);
  }
  for (const auto& [label, port] : c.outputs()) {
    if (ids.count(port.vertex)) r.circuit.set_output(label, port);
  }
  for (const auto& e : c.edges()) {
    bool from_in = ids.count(e.from.vertex) != 0;
    bool to_in = ids.count(e.to.vertex) != 0;
    if (from_in && to_in) {
      r.circuit.add_edge(e.from, e.to);
    } else if (to_in) {
      auto label = cut_label(e.to.vertex, e.to.port);
      require(!r.circuit.inputs().count(label) && !r.circuit.outputs().count(label),
              Errc::name_collision, "cut label '" + label + "' collides with an existing label");
      r.circuit.set_input(label, e.to);
      r.cut_input_source[label] = e.from;
    } else if (from_in) {
      auto label = cut_label(e.from.vertex, e.from.port);
      auto existing = r.circuit.outputs().find(label);
      require(existing == r.circuit.outputs().end() || existing->second == e.from,
              Errc::name_collision, "cut label '" + label + "' collides with an existing label");
      r.circuit.set_output(label, e.from);
      r.cut_output_targets[label].push_back(e.to);
    }
  }
  return r;
}

bool reaches(const Circuit& c, const std::string& from, const std::string& to) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& e : c.edges()) succ[e.from.vertex].push_back(e.to.vertex);
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (v == to) return true;
    for (const auto& w : succ[v]) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return false;
}

}  // namespace

std::string cut_label(const std::string& vertex, const std::string& port) {
  return std::string(kCutPrefix) + vertex + ":" + port;
}

Circuit circuit_union(const Circuit& a, const Circuit& b) {
  Circuit out = a;
  std::map<std::string, std::string> rename;
  for (const auto& [id, op] : b.vertices()) {
    auto fresh = fresh_name(id, [&](const std::string& s) {
      return out.has_vertex(s) || (b.has_vertex(s) && s != id);
    });
    rename[id] = fresh;
    out.add_vertex(fresh, op);
  }
  auto map_port = [&](const PortRef& p) { return PortRef{rename.at(p.vertex), p.port}; };
  for (const auto& e : b.edges()) out.add_edge(map_port(e.from), map_port(e.to));
  auto label_taken = [&](const std::string& s) {
    return out.inputs().count(s) || out.outputs().count(s);
  };
  for (const auto& [label, port] : b.inputs()) out.set_input(fresh_name(label, label_taken), map_port(port));
  for (const auto& [label, port] : b.outputs()) out.set_output(fresh_name(label, label_taken), map_port(port));
  return out;
}

Circuit assign_input(const Circuit& c, const std::string& label, const PortRef& source) {
  auto it = c.inputs().find(label);
  require(it != c.inputs().end(), Errc::invalid_argument, "no circuit input '" + label + "'");
  require(c.direction(source) == PortDirection::out, Errc::invalid_argument,
          source.to_string() + " is not an out-port");
  const PortRef target = it->second;
  auto ts = c.port_type(source), tt = c.port_type(target);
  require(ts == tt, Errc::type_mismatch,
          "assign '" + label + "': " + ts.to_string() + " source into " + tt.to_string() + " port");
  require(source.vertex != target.vertex && !reaches(c, target.vertex, source.vertex), Errc::cycle,
          "assigning '" + label + "' from " + source.to_string() + " would create a cycle");
  Circuit out = c;
  out.remove_input(label);
  out.add_edge(source, target);
  return out;
}

Circuit induced_subcircuit(const Circuit& c, const std::set<std::string>& vertex_ids) {
  return induce(c, vertex_ids).circuit;
}

Circuit replace_subcircuit(const Circuit& c, const std::set<std::string>& vertex_ids,
                           const Circuit& replacement,
                           const std::map<std::string, std::string>& rho) {
  Induced ind = induce(c, vertex_ids);
  const Circuit& sub = ind.circuit;

  // Induced label -> replacement label, checked to be a type-preserving bijection.
  std::map<std::string, std::string> to_repl;
  auto collect = [&](const std::map<std::string, PortRef>& repl_side,
                     const std::map<std::string, PortRef>& sub_side, const char* what) {
    for (const auto& [rlabel, rport] : repl_side) {
      auto m = rho.find(rlabel);
      const std::string& slabel = m == rho.end() ? rlabel : m->second;
      auto s = sub_side.find(slabel);
      require(s != sub_side.end(), Errc::bijection_incomplete,
              std::string("replacement ") + what + " '" + rlabel + "' maps to unknown label '" +
                  slabel + "'");
      require(!to_repl.count(slabel), Errc::bijection_incomplete,
              "label '" + slabel + "' is the image of several replacement labels");
      auto rt = replacement.port_type(rport), st = sub.port_type(s->second);
      require(rt == st, Errc::type_mismatch,
              "label '" + slabel + "': replacement " + rt.to_string() + " vs " + st.to_string());
      to_repl[slabel] = rlabel;
    }
    for (const auto& [slabel, sport] : sub_side) {
      require(to_repl.count(slabel), Errc::bijection_incomplete,
              std::string("no replacement ") + what + " for '" + slabel + "'");
    }
  };
  collect(replacement.inputs(), sub.inputs(), "input");
  collect(replacement.outputs(), sub.outputs(), "output");

  Circuit out;
  for (const auto& [id, op] : c.vertices()) {
    if (!vertex_ids.count(id)) out.add_vertex(id, op);
  }
  std::map<std::string, std::string> rename;
  for (const auto& [id, op] : replacement.vertices()) {
    auto fresh = fresh_name(id, [&](const std::string& s) { return out.has_vertex(s); });
    rename[id] = fresh;
    out.add_vertex(fresh, op);
  }
  auto rport = [&](const PortRef& p) { return PortRef{rename.at(p.vertex), p.port}; };

  for (const auto& e : c.edges()) {
    if (!vertex_ids.count(e.from.vertex) && !vertex_ids.count(e.to.vertex)) out.add_edge(e.from, e.to);
  }
  for (const auto& e : replacement.edges()) out.add_edge(rport(e.from), rport(e.to));

  for (const auto& [label, port] : c.inputs()) {
    if (!vertex_ids.count(port.vertex)) out.set_input(label, port);
  }
  for (const auto& [label, port] : c.outputs()) {
    if (!vertex_ids.count(port.vertex)) out.set_output(label, port);
  }
  for (const auto& [slabel, sport] : sub.inputs()) {
    PortRef target = rport(replacement.inputs().at(to_repl.at(slabel)));
    auto cut = ind.cut_input_source.find(slabel);
    if (cut != ind.cut_input_source.end()) {
      out.add_edge(cut->second, target);
    } else {
      out.set_input(slabel, target);
    }
  }
  for (const auto& [slabel, sport] : sub.outputs()) {
    PortRef source = rport(replacement.outputs().at(to_repl.at(slabel)));
    auto cut = ind.cut_output_targets.find(slabel);
    if (cut != ind.cut_output_targets.end()) {
      for (const auto& t : cut->second) out.add_edge(source, t);
    }
    if (c.outputs().count(slabel)) out.set_output(slabel, source);
  }
  auto report = validate_circuit(out);
  if (!report.ok()) fail(Errc::invalid_circuit, "replacement result invalid: " + report.to_string());
  return out;
}

Circuit lift_operator(OperatorPtr op, const std::string& vertex_id) {
  Circuit c;
  c.add_vertex(vertex_id, op);
  for (const auto& p : op->signature().inputs) c.set_input(p.label, PortRef{vertex_id, p.label});
  for (const auto& p : op->signature().outputs) c.set_output(p.label, PortRef{vertex_id, p.label});
  return c;
}

OperatorPtr make_fused_operator(const std::string& name, const Circuit& inner) {
  return std::make_shared<FusedOperator>(name, inner);
}

OperatorPtr make_fused_operator(const std::string& name, const json& inner_circuit) {
  return make_fused_operator(name, circuit_from_json(inner_circuit));
}

Circuit fuse_subcircuit(const Circuit& c, const std::set<std::string>& vertex_ids,
                        const std::string& fused_name, OperatorCatalog& catalog) {
  require(!vertex_ids.empty(), Errc::invalid_argument, "fuse: empty vertex set");
  require(!fused_name.empty() && fused_name.find('.') == std::string::npos,
          Errc::invalid_argument, "fused name must be non-empty and free of '.'");
  auto op = make_fused_operator(fused_name, induced_subcircuit(c, vertex_ids));
  catalog.register_op(fused_name, [op](const json&) { return op; });
  std::set<std::string> remaining;
  for (const auto& [id, v] : c.vertices()) {
    if (!vertex_ids.count(id)) remaining.insert(id);
  }
  auto vid = fresh_name(fused_name, [&](const std::string& s) { return remaining.count(s) != 0; });
  return replace_subcircuit(c, vertex_ids, lift_operator(op, vid));
}

Circuit eliminate_duplicate_vertices(const Circuit& input) {
  Circuit c = input;
  for (;;) {
    std::map<PortRef, std::string> source;  // in-port -> rendered source
    for (const auto& e : c.edges()) source[e.to] = "e:" + e.from.to_string();
    for (const auto& [label, port] : c.inputs()) source[port] = "i:" + label;

    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& [id, op] : c.vertices()) {
      if (!op->dedupable()) continue;
      std::string key = op->name() + "\x1f" + op->params().dump();
      for (const auto& p : op->signature().inputs) key += "\x1f" + p.label + "=" + source[PortRef{id, p.label}];
      groups[key].push_back(id);
    }
    std::map<std::string, std::string> merge;  // duplicate -> kept
    for (const auto& [key, ids] : groups) {
      for (std::size_t k = 1; k < ids.size(); ++k) merge[ids[k]] = ids.front();
    }
    if (merge.empty()) return c;

    Circuit next;
    for (const auto& [id, op] : c.vertices()) {
      if (!merge.count(id)) next.add_vertex(id, op);
    }
    auto redirect = [&](const PortRef& p) {
      auto m = merge.find(p.vertex);
      return m == merge.end() ? p : PortRef{m->second, p.port};
    };
    for (const auto& e : c.edges()) {
      if (merge.count(e.to.vertex)) continue;
      next.add_edge(redirect(e.from), e.to);
    }
    for (const auto& [label, port] : c.inputs()) next.set_input(label, port);
    for (const auto& [label, port] : c.outputs()) next.set_output(label, redirect(port));
    c = std::move(next);
  }
}

}  // namespace colcirc
