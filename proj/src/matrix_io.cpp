#include "opball/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace opball {

namespace {

Error parse_error(const std::string& where, const std::string& what) {
  return Error(ErrorKind::ParseError, where.empty() ? what : where + ": " + what);
}

Index count_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw parse_error(where, std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw parse_error(where, std::string("field '") + key + "' must be a positive integer");
  }
  return static_cast<Index>(v.get<long long>());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw parse_error(path.string(), e.what());
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw parse_error(path.string(), "cannot open file for writing");
  out << j.dump(2) << '\n';
  if (!out) throw parse_error(path.string(), "write failed");
}

Matrix matrix_from_json_at(const Json& j, const std::string& where) {
  if (!j.is_object()) throw parse_error(where, "matrix must be a JSON object");
  const Index rows = count_field(j, "rows", where);
  const Index cols = count_field(j, "cols", where);
  if (!j.contains("data")) throw parse_error(where, "missing field 'data'");
  const Json& data = j.at("data");
  if (!data.is_array()) throw parse_error(where, "field 'data' must be an array");
  if (static_cast<Index>(data.size()) != rows * cols) {
    std::ostringstream msg;
    msg << "data has " << data.size() << " entries, expected rows*cols = " << rows * cols;
    throw Error(ErrorKind::ShapeError, where.empty() ? msg.str() : where + ": " + msg.str());
  }
  Matrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    // NaN and infinities arrive as null in JSON produced by most writers
    if (e.is_array() && e.size() == 2 && (e[0].is_null() || e[1].is_null())) {
      throw parse_error(where, "non-finite entry at index " + std::to_string(k));
    }
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw parse_error(where, "data[" + std::to_string(k) + "] must be a [re, im] pair");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw parse_error(where, "non-finite entry at index " + std::to_string(k));
    }
    m(static_cast<Index>(k) / cols, static_cast<Index>(k) % cols) = Complex(re, im);
  }
  return m;
}

}  // namespace

Matrix matrix_from_json(const Json& j) { return matrix_from_json_at(j, ""); }

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out;
}

Matrix load_matrix(const std::filesystem::path& path) {
  return matrix_from_json_at(read_json(path), path.string());
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  require_valid(m, "matrix to save");
  write_json(matrix_to_json(m), path);
}

GroupFiles load_group_dir(const std::filesystem::path& dir) {
  const std::filesystem::path table_path = dir / "table.json";
  const Json meta = read_json(table_path);
  const std::string where = table_path.string();
  if (!meta.is_object()) throw parse_error(where, "expected a JSON object");
  const Index order = count_field(meta, "order", where);

  GroupFiles out;
  if (meta.contains("table") && !meta.at("table").is_null()) {
    const Json& t = meta.at("table");
    if (!t.is_array() || static_cast<Index>(t.size()) != order) {
      throw Error(ErrorKind::ShapeError, where + ": 'table' must have 'order' rows");
    }
    GroupTable table;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Json& row = t[i];
      if (!row.is_array() || static_cast<Index>(row.size()) != order) {
        throw Error(ErrorKind::ShapeError, where + ": table row " + std::to_string(i) + " has the wrong length");
      }
      std::vector<std::size_t> r;
      for (const Json& k : row) {
        if (!k.is_number_integer() || k.get<long long>() < 0 || k.get<long long>() >= order) {
          throw parse_error(where, "table row " + std::to_string(i) + " holds an invalid index");
        }
        r.push_back(static_cast<std::size_t>(k.get<long long>()));
      }
      table.push_back(std::move(r));
    }
    out.table = std::move(table);
  }
  if (meta.contains("sig") && !meta.at("sig").is_null()) {
    const Json& s = meta.at("sig");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
      throw parse_error(where, "'sig' must be [n_plus, n_minus]");
    }
    out.sig = std::make_pair(static_cast<Index>(s[0].get<long long>()), static_cast<Index>(s[1].get<long long>()));
  }
  for (Index k = 0; k < order; ++k) {
    out.elements.push_back(load_matrix(dir / ("elem_" + std::to_string(k) + ".json")));
  }
  return out;
}

void save_group_dir(const std::filesystem::path& dir, const GroupTable& table,
                    const std::vector<Matrix>& elements, std::pair<Index, Index> sig) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw parse_error(dir.string(), "cannot create directory: " + ec.message());
  Json meta;
  meta["order"] = elements.size();
  meta["table"] = table;
  meta["sig"] = Json::array({sig.first, sig.second});
  write_json(meta, dir / "table.json");
  for (std::size_t k = 0; k < elements.size(); ++k) {
    save_matrix(elements[k], dir / ("elem_" + std::to_string(k) + ".json"));
  }
}

}  // namespace opball
