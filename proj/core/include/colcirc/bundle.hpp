#pragma once

#include <filesystem>

#include "colcirc/codec.hpp"

namespace colcirc {

// Bundle directory: manifest.json {"scheme", "params", "columns": {label: file}}
// next to one .col file per encoded column.
void write_bundle(const std::filesystem::path& dir, const SchemeInstance& inst);
SchemeInstance read_bundle(const std::filesystem::path& dir);

}  // namespace colcirc
