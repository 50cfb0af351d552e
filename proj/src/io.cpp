#include "itlab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace itlab {
namespace {

using nlohmann::json;

json matrix_to_rows(const IntMatrix& mat) {
  json rows = json::array();
  for (int i = 0; i < mat.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < mat.cols; ++j) row.push_back(mat.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix matrix_from_rows(const json& rows, int want_rows, int want_cols, const char* name) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != want_rows) {
    throw ValidationError(std::string(name) + ": expected " + std::to_string(want_rows) +
                          " rows");
  }
  IntMatrix mat(want_rows, want_cols);
  for (int i = 0; i < want_rows; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != want_cols) {
      throw ValidationError(std::string(name) + ": expected " + std::to_string(want_cols) +
                            " columns per row");
    }
    for (int j = 0; j < want_cols; ++j) {
      const json& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_number_integer()) {
        throw ValidationError(std::string(name) + ": entries must be integers");
      }
      mat.at(i, j) = cell.get<std::int64_t>();
    }
  }
  return mat;
}

json parse(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("malformed JSON");
  return doc;
}

}  // namespace

Instance make_instance(const ModelParams& params, const SeedSpec& seed) {
  Instance inst;
  inst.params = params;
  inst.factors = generate_source(params, seed);
  inst.s = product(inst.factors, params);
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["m"] = inst.params.m;
  doc["r"] = inst.params.r;
  doc["q"] = inst.params.q;
  doc["semiring"] = to_string(inst.params.semiring);
  doc["u"] = matrix_to_rows(inst.factors.u);
  doc["v"] = matrix_to_rows(inst.factors.v);
  doc["s"] = matrix_to_rows(inst.s);
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json doc = parse(text);
  for (const char* key : {"m", "r", "q", "semiring", "u", "v"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("instance: missing key ") + key);
  }
  Instance inst;
  if (!doc["m"].is_number_integer() || !doc["r"].is_number_integer() ||
      !doc["q"].is_number_integer()) {
    throw ValidationError("instance: m, r, q must be integers");
  }
  inst.params.m = doc["m"].get<int>();
  inst.params.r = doc["r"].get<int>();
  inst.params.q = doc["q"].get<std::int64_t>();
  if (!doc["semiring"].is_string()) throw ValidationError("instance: semiring must be a string");
  inst.params.semiring = semiring_from_string(doc["semiring"].get<std::string>());
  inst.params.validate();
  inst.factors.u = matrix_from_rows(doc["u"], inst.params.m, inst.params.r, "u");
  inst.factors.v = matrix_from_rows(doc["v"], inst.params.r, inst.params.m, "v");
  inst.s = product(inst.factors, inst.params);
  if (doc.contains("s")) {
    const IntMatrix claimed = matrix_from_rows(doc["s"], inst.params.m, inst.params.m, "s");
    if (claimed != inst.s) {
      throw ValidationError("instance: stored s does not equal the product of u and v");
    }
  }
  return inst;
}

std::string locations_to_json(const LocationSequence& locs) {
  json doc;
  doc["m"] = locs.m;
  json list = json::array();
  for (const auto& [i, j] : locs.locations) list.push_back(json::array({i, j}));
  doc["locations"] = std::move(list);
  return doc.dump(2) + "\n";
}

LocationSequence locations_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.contains("m") || !doc.contains("locations")) {
    throw ValidationError("locations: missing key m or locations");
  }
  if (!doc["m"].is_number_integer()) throw ValidationError("locations: m must be an integer");
  LocationSequence locs;
  locs.m = doc["m"].get<int>();
  const json& list = doc["locations"];
  if (!list.is_array()) throw ValidationError("locations: locations must be an array");
  for (const json& cell : list) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() ||
        !cell[1].is_number_integer()) {
      throw ValidationError("locations: each entry must be an integer pair");
    }
    locs.locations.emplace_back(cell[0].get<int>(), cell[1].get<int>());
  }
  locs.validate();
  return locs;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace itlab
