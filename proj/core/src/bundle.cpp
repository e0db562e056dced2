#include "colcirc/bundle.hpp"

#include <fstream>

#include "colcirc/column_io.hpp"
#include "colcirc/error.hpp"

namespace colcirc {

namespace fs = std::filesystem;

void write_bundle(const fs::path& dir, const SchemeInstance& inst) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, Errc::io_error, "cannot create bundle directory " + dir.string());
  json files = json::object();
  for (const auto& [label, col] : inst.columns) {
    std::string name = label + ".col";
    write_column(dir / name, col);
    files[label] = name;
  }
  json manifest{{"scheme", inst.scheme_id}, {"params", inst.params}, {"columns", files}};
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  require(static_cast<bool>(out), Errc::io_error, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

SchemeInstance read_bundle(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  require(static_cast<bool>(in), Errc::io_error, "no manifest.json in " + dir.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("malformed manifest: ") + e.what());
  }
  require(manifest.is_object() && manifest.contains("scheme") && manifest["scheme"].is_string() &&
              manifest.contains("columns") && manifest["columns"].is_object(),
          Errc::parse_error, "manifest needs 'scheme' and 'columns'");
  SchemeInstance inst;
  inst.scheme_id = manifest["scheme"].get<std::string>();
  inst.params = manifest.value("params", json::object());
  for (const auto& [label, file] : manifest["columns"].items()) {
    require(file.is_string(), Errc::parse_error, "column entry for '" + label + "' must be a path");
    inst.columns.emplace(label, read_column(dir / file.get<std::string>()));
  }
  return inst;
}

}  // namespace colcirc
