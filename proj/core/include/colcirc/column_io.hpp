#pragma once

#include <filesystem>
#include <string>

#include "colcirc/column.hpp"

namespace colcirc {

// Binary `.col` format: "CCOL1", kind byte, width byte, u64 LE length, then
// values little-endian in ceil(width/8) bytes each (bit columns packed
// LSB-first, unit columns carry no payload). Product columns put the component
// count in the width byte, follow it with each component's (kind, width) tag,
// and store component payloads one after another.
std::string serialize_column(const Column& col);
Column parse_column(const std::string& bytes);

void write_column(const std::filesystem::path& path, const Column& col);
Column read_column(const std::filesystem::path& path);

}  // namespace colcirc
