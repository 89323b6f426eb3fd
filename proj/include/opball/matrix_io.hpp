#pragma once

// JSON matrix files {"rows", "cols", "data": [[re, im], ...]} (row-major) and
// representation directories (table.json + elem_<k>.json).

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opball/fixedpoint.hpp"

namespace opball {

using Json = nlohmann::ordered_json;

/// Throws ParseError for missing or malformed fields and non-finite entries,
/// ShapeError when the data length is not rows * cols.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

Matrix load_matrix(const std::filesystem::path& path);
/// Doubles are written in shortest round-trip form, so load_matrix restores
/// them bit for bit.
void save_matrix(const Matrix& m, const std::filesystem::path& path);

struct GroupFiles {
  std::optional<GroupTable> table;  // absent: the elements are generators
  std::vector<Matrix> elements;
  std::optional<std::pair<Index, Index>> sig;
};

/// table.json holds {"order": n, "table": [[...]], "sig": [p, q]} with
/// "table" and "sig" optional; elements are elem_0.json ... elem_{n-1}.json.
GroupFiles load_group_dir(const std::filesystem::path& dir);
void save_group_dir(const std::filesystem::path& dir, const GroupTable& table,
                    const std::vector<Matrix>& elements, std::pair<Index, Index> sig);

}  // namespace opball
