#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/mask.hpp"

namespace wfrpca {

// Shortest round-trippable decimal form, at least 17 significant digits.
std::string format_full(double v);

// Matrix text format: first line "rows cols", then `rows` lines of `cols`
// space-separated decimals at full precision.
void write_matrix(const DenseMatrix& m, const std::filesystem::path& path);
DenseMatrix read_matrix(const std::filesystem::path& path);

// Mask text format: first line "rows cols count", then `count` lines of
// zero-based "i j".
void write_mask(const ObservationMask& mask, const std::filesystem::path& path);
ObservationMask read_mask(const std::filesystem::path& path);

// Flat "key = value" files (configs and manifests): UTF-8, '#' comments,
// lower_snake_case keys.
using KeyValueList = std::vector<std::pair<std::string, std::string>>;

KeyValueList parse_flat_file(const std::filesystem::path& path);
KeyValueList parse_flat_text(const std::string& text);
void write_flat_file(const KeyValueList& entries, const std::filesystem::path& path);

}  // namespace wfrpca
