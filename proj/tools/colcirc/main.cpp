// colcirc: encode, decode and verify columns; evaluate and transform circuits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "colcirc/bundle.hpp"
#include "colcirc/codec.hpp"
#include "colcirc/column_io.hpp"
#include "colcirc/error.hpp"
#include "colcirc/synth.hpp"
#include "colcirc/transform.hpp"

namespace fs = std::filesystem;
using namespace colcirc;

namespace {

enum Exit { ok = 0, usage = 1, not_encodable = 2, rejected = 3, bad_circuit = 4, op_failed = 5 };

// Carries a chosen exit code out of a command.
struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::not_encodable: return not_encodable;
    case Errc::verification_failed: return rejected;
    case Errc::invalid_circuit:
    case Errc::cycle:
    case Errc::unknown_operator:
    case Errc::name_collision:
    case Errc::duplicate_id:
    case Errc::bijection_incomplete: return bad_circuit;
    case Errc::operator_failure: return op_failed;
    default: return usage;
  }
}

std::string format_ratio(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json parse_params(const std::string& text) {
  if (text.empty()) return json::object();
  std::string body = text;
  if (text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw Error(Errc::io_error, "cannot open params file " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    json p = json::parse(body);
    if (!p.is_object()) throw Error(Errc::invalid_argument, "params must be a JSON object");
    return p;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad params JSON: ") + e.what());
  }
}

// "label=path" or a bare path, which gets `fallback` as its label.
std::pair<std::string, std::string> labeled_path(const std::string& arg, const std::string& fallback) {
  auto eq = arg.find('=');
  if (eq == std::string::npos) return {fallback, arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

ColumnFamily read_inputs(const std::vector<std::string>& args) {
  ColumnFamily family;
  for (const auto& arg : args) {
    auto [label, path] = labeled_path(arg, kColumnLabel);
    if (!family.emplace(label, read_column(path)).second) {
      throw Error(Errc::invalid_argument, "input label '" + label + "' given twice");
    }
  }
  return family;
}

void write_family(const fs::path& dir, const ColumnFamily& family) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string());
  for (const auto& [label, col] : family) write_column(dir / (label + ".col"), col);
}

// Bundle problems other than a missing directory count as rejection.
SchemeInstance load_bundle(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::io_error, "no bundle directory " + dir);
  try {
    return read_bundle(dir);
  } catch (const Error& e) {
    if (e.code() == Errc::io_error && !fs::exists(fs::path(dir) / "manifest.json")) throw;
    throw ExitError(rejected, std::string("reject: ") + e.what());
  }
}

Circuit load_circuit(const std::string& path) {
  if (!fs::exists(path)) throw Error(Errc::io_error, "cannot open " + path);
  try {
    return read_circuit(path);
  } catch (const Error& e) {
    if (e.code() == Errc::io_error) throw;
    throw ExitError(bad_circuit, std::string("invalid circuit: ") + e.what());
  }
}

void emit_circuit(const Circuit& c, const std::string& out) {
  std::string text = circuit_to_json(c).dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw Error(Errc::io_error, "cannot write " + out);
  f << text;
}

std::set<std::string> vertex_set(const Circuit& c, const std::vector<std::string>& listed) {
  std::set<std::string> ids(listed.begin(), listed.end());
  if (ids.empty()) {
    for (const auto& [id, op] : c.vertices()) ids.insert(id);
  }
  return ids;
}

json column_stats(const Column& col, std::size_t top) {
  auto freq = frequency_distribution(col);
  std::vector<std::pair<std::uint64_t, Value>> ranked;
  for (const auto& [v, n] : freq.entries) ranked.push_back({n, v});
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  json top_values = json::array();
  for (std::size_t i = 0; i < std::min(top, ranked.size()); ++i) {
    top_values.push_back({{"value", ranked[i].second.to_string()}, {"count", ranked[i].first}});
  }
  return {{"type", col.type().to_string()},
          {"length", col.size()},
          {"bytes", column_size_bytes(col)},
          {"support_size", freq.support_size()},
          {"top", top_values}};
}

void print_stats(const json& s, bool as_json) {
  if (as_json) {
    std::cout << s.dump(2) << "\n";
    return;
  }
  if (s.contains("scheme")) {
    std::cout << "scheme: " << s["scheme"].get<std::string>() << "\n";
    std::cout << "decoded bytes: " << s["decoded_bytes"] << "\n";
  }
  std::cout << "encoded bytes: " << s["encoded_bytes"] << "\n";
  std::cout << "ratio: " << s["ratio"].get<std::string>() << "\n";
  for (const auto& [label, c] : s["columns"].items()) {
    std::cout << "  " << label << ": " << c["type"].get<std::string>() << " x " << c["length"] << ", "
              << c["bytes"] << " bytes, support " << c["support_size"];
    if (!c["top"].empty()) {
      std::cout << ", top";
      for (const auto& t : c["top"]) std::cout << " " << t["value"].get<std::string>() << "(" << t["count"] << ")";
    }
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Columnar circuits and codecs"};
  app.require_subcommand(1);

  // encode
  std::string scheme, params_text, out_dir;
  std::vector<std::string> inputs;
  auto* enc = app.add_subcommand("encode", "Encode columns into a bundle directory");
  enc->add_option("--scheme,-s", scheme, "Scheme id")->required();
  enc->add_option("--params,-p", params_text, "Scheme params: inline JSON or @file");
  enc->add_option("inputs", inputs, "Input .col files, optionally label=path")->required();
  enc->add_option("--out,-o", out_dir, "Bundle directory")->required();

  // decode / verify
  std::string bundle;
  auto* dec = app.add_subcommand("decode", "Verify and decode a bundle into .col files");
  dec->add_option("bundle", bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);
  dec->add_option("--out,-o", out_dir, "Output directory")->required();
  auto* ver = app.add_subcommand("verify", "Run the scheme verifier on a bundle");
  ver->add_option("bundle", bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);

  // eval
  std::string circuit_path;
  bool trace = false;
  std::size_t threads = 1;
  auto* ev = app.add_subcommand("eval", "Evaluate a circuit on .col inputs");
  ev->add_option("circuit", circuit_path, "Circuit JSON")->required();
  ev->add_option("--input,-i", inputs, "label=path, one per circuit input");
  ev->add_option("--out,-o", out_dir, "Output directory")->required();
  ev->add_option("--threads,-j", threads, "Evaluation threads");
  ev->add_flag("--trace", trace, "Print the column at every port");

  // stats
  std::string stats_path;
  bool as_json = false;
  std::size_t top = 5;
  auto* st = app.add_subcommand("stats", "Sizes, ratio and value distribution of a .col file or bundle");
  st->add_option("path", stats_path, ".col file or bundle directory")->required();
  st->add_flag("--json", as_json, "JSON report");
  st->add_option("--top", top, "Most frequent values to list");

  // transform
  std::string op, out_path, fused_name = "Fused", other_path, label, source;
  std::vector<std::string> vertices, mapping;
  auto* tr = app.add_subcommand("transform", "Rewrite a circuit");
  tr->add_option("circuit", circuit_path, "Circuit JSON")->required();
  tr->add_option("--op", op, "fuse, dedup, induce, replace, union or assign")
      ->required()
      ->check(CLI::IsMember({"fuse", "dedup", "induce", "replace", "union", "assign"}));
  tr->add_option("--vertices,-v", vertices, "Vertex ids (default: all)")->delimiter(',');
  tr->add_option("--name", fused_name, "Operator name for fuse");
  tr->add_option("--with", other_path, "Replacement (replace) or second circuit (union)");
  tr->add_option("--map", mapping, "replacement_label=subcircuit_label for replace")->delimiter(',');
  tr->add_option("--label", label, "Input label for assign");
  tr->add_option("--source", source, "vertex.port feeding the label for assign");
  tr->add_option("--out,-o", out_path, "Output circuit JSON (default: stdout)");

  // gen
  std::string kind, type_text = "u32", options_text;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "Write a synthetic column");
  gen->add_option("kind", kind, "uniform, runs, zipf, noisy-linear or geometric")->required();
  gen->add_option("--n", n, "Length");
  gen->add_option("--type,-t", type_text, "Element type");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--options", options_text, "Generator options as JSON");
  gen->add_option("--out,-o", out_path, "Output .col file")->required();

  auto* list = app.add_subcommand("schemes", "List registered schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  try {
    if (*enc) {
      auto inst = encode(scheme, parse_params(params_text), read_inputs(inputs));
      write_bundle(out_dir, inst);
    } else if (*dec) {
      auto inst = load_bundle(bundle);
      write_family(out_dir, decode(inst));
    } else if (*ver) {
      auto inst = load_bundle(bundle);
      auto v = verify(inst);
      std::cout << (v.accepted ? "accept" : "reject: " + v.reason) << "\n";
      return v.accepted ? ok : rejected;
    } else if (*ev) {
      Circuit c = load_circuit(circuit_path);
      auto report = validate_circuit(c);
      if (!report.ok()) throw ExitError(bad_circuit, "invalid circuit: " + report.to_string());
      EvalOptions options;
      options.threads = std::max<std::size_t>(1, threads);
      options.trace = trace;
      auto result = evaluate_circuit_full(c, read_inputs(inputs), options);
      write_family(out_dir, result.outputs);
      for (const auto& [port, col] : result.trace) std::cout << port << " = " << col.to_string(64) << "\n";
    } else if (*st) {
      json s;
      if (fs::is_directory(stats_path)) {
        auto inst = load_bundle(stats_path);
        auto ratio = compression_ratio(inst);
        s = {{"scheme", inst.scheme_id},
             {"decoded_bytes", ratio.decoded_bytes},
             {"encoded_bytes", ratio.encoded_bytes},
             {"ratio", format_ratio(ratio.value())}};
        for (const auto& [l, col] : inst.columns) s["columns"][l] = column_stats(col, top);
      } else {
        Column col = read_column(stats_path);
        s = {{"encoded_bytes", column_size_bytes(col)}, {"ratio", format_ratio(col.empty() ? 0.0 : 1.0)}};
        s["columns"][kColumnLabel] = column_stats(col, top);
      }
      print_stats(s, as_json);
    } else if (*tr) {
      Circuit c = load_circuit(circuit_path);
      Circuit out;
      if (op == "fuse") {
        out = fuse_subcircuit(c, vertex_set(c, vertices), fused_name);
      } else if (op == "dedup") {
        out = eliminate_duplicate_vertices(c);
      } else if (op == "induce") {
        out = induced_subcircuit(c, vertex_set(c, vertices));
      } else if (op == "replace") {
        if (other_path.empty()) throw Error(Errc::invalid_argument, "replace needs --with");
        std::map<std::string, std::string> rho;
        for (const auto& m : mapping) {
          auto [from, to] = labeled_path(m, "");
          if (from.empty()) throw Error(Errc::invalid_argument, "--map entries look like a=b");
          rho[from] = to;
        }
        out = replace_subcircuit(c, vertex_set(c, vertices), load_circuit(other_path), rho);
      } else if (op == "union") {
        if (other_path.empty()) throw Error(Errc::invalid_argument, "union needs --with");
        out = circuit_union(c, load_circuit(other_path));
      } else {
        if (label.empty() || source.empty()) throw Error(Errc::invalid_argument, "assign needs --label and --source");
        out = assign_input(c, label, PortRef::parse(source));
      }
      emit_circuit(out, out_path);
    } else if (*gen) {
      json options = options_text.empty() ? json::object() : parse_params(options_text);
      write_column(out_path, synth::generate(kind, n, ElementType::parse(type_text), seed, options));
    } else if (*list) {
      for (const auto& id : CodecRegistry::builtin().ids()) {
        std::cout << id << "  " << CodecRegistry::builtin().find(id).summary << "\n";
      }
    }
  } catch (const ExitError& e) {
    std::cerr << e.what() << "\n";
    return e.code;
  } catch (const OperatorFailure& e) {
    std::cerr << "operator failure at vertex '" << e.vertex() << "': " << e.what() << "\n";
    return op_failed;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return usage;
  }
  return ok;
}
