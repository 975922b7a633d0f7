#pragma once

// On-disk field format: a JSON header <base>.json
//   {"n":3,"N":..,"L":..,"space":"position|frequency","dtype":"c128",
//    "layout":"row-major z-fastest"}
// next to <base>.bin holding interleaved little-endian (re, im) float64.

#include <filesystem>

#include "quadscat/grid.hpp"

namespace quadscat {

/// Strips a trailing .json or .bin so either file name can be passed.
std::filesystem::path field_basename(const std::filesystem::path& path);

void write_field(const ScalarField& field, const std::filesystem::path& path);
/// Throws std::runtime_error on missing files or malformed headers.
ScalarField read_field(const std::filesystem::path& path);

}  // namespace quadscat
