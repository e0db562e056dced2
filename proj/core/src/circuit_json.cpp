#include <fstream>
#include <sstream>

#include "colcirc/catalog.hpp"
#include "colcirc/circuit.hpp"
#include "colcirc/error.hpp"

namespace colcirc {

json circuit_to_json(const Circuit& c) {
  json vertices = json::array();
  for (const auto& [id, op] : c.vertices()) {
    vertices.push_back(json{{"id", id}, {"op", op->name()}, {"params", op->to_json_params()}});
  }
  std::vector<Edge> edges = c.edges();
  std::sort(edges.begin(), edges.end());
  json edge_list = json::array();
  for (const auto& e : edges) {
    edge_list.push_back(json{{"from", e.from.to_string()}, {"to", e.to.to_string()}});
  }
  json iface = json::object();
  for (const auto& [label, port] : c.inputs()) iface[label] = port.to_string();
  for (const auto& [label, port] : c.outputs()) iface[label] = port.to_string();
  json sig;
  try {
    sig = c.signature().to_json();
  } catch (const Error&) {
    sig = json{{"inputs", json::object()}, {"outputs", json::object()}};
  }
  return json{{"signature", sig}, {"vertices", vertices}, {"edges", edge_list}, {"interface", iface}};
}

Circuit circuit_from_json(const json& j) {
  require(j.is_object(), Errc::parse_error, "circuit JSON must be an object");
  Circuit c;
  if (j.contains("vertices")) {
    require(j["vertices"].is_array(), Errc::parse_error, "'vertices' must be an array");
    for (const auto& v : j["vertices"]) {
      require(v.is_object() && v.contains("id") && v.contains("op"), Errc::parse_error,
              "vertex entries need 'id' and 'op'");
      json params = v.contains("params") ? v["params"] : json::object();
      c.add_vertex(v["id"].get<std::string>(),
                   OperatorCatalog::global().make(v["op"].get<std::string>(), params));
    }
  }
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      require(e.is_object() && e.contains("from") && e.contains("to"), Errc::parse_error,
              "edge entries need 'from' and 'to'");
      c.add_edge(PortRef::parse(e["from"].get<std::string>()),
                 PortRef::parse(e["to"].get<std::string>()));
    }
  }
  const json& sig = j.contains("signature") ? j["signature"] : json::object();
  auto declared = [&](const char* side, const std::string& label) {
    return sig.contains(side) && sig[side].contains(label);
  };
  if (j.contains("interface")) {
    for (const auto& [label, target] : j["interface"].items()) {
      PortRef port = PortRef::parse(target.get<std::string>());
      auto dir = c.direction(port);
      if (dir == PortDirection::in || (dir == PortDirection::none && declared("inputs", label))) {
        c.set_input(label, port);
      } else {
        c.set_output(label, port);
      }
    }
  }
  if (j.contains("signature")) {
    // The declared signature must agree with the one implied by the interface.
    for (const char* side : {"inputs", "outputs"}) {
      if (!sig.contains(side)) continue;
      const auto& mapped = std::string(side) == "inputs" ? c.inputs() : c.outputs();
      for (const auto& [label, type] : sig[side].items()) {
        auto it = mapped.find(label);
        require(it != mapped.end(), Errc::invalid_circuit,
                std::string("signature ") + side + " label '" + label + "' not in interface");
        if (c.direction(it->second) == PortDirection::none) continue;
        auto actual = c.port_type(it->second);
        require(actual == ElementType::parse(type.get<std::string>()), Errc::invalid_circuit,
                "signature type for '" + label + "' is " + type.get<std::string>() +
                    " but port carries " + actual.to_string());
      }
    }
  }
  return c;
}

Circuit read_circuit(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("malformed circuit JSON: ") + e.what());
  }
  return circuit_from_json(j);
}

void write_circuit(const std::string& path, const Circuit& c) {
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), Errc::io_error, "cannot open " + path + " for writing");
  out << circuit_to_json(c).dump(2) << "\n";
}

}  // namespace colcirc
