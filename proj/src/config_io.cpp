#include "iblt/config_io.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "iblt/errors.hpp"

namespace iblt {

using nlohmann::json;

namespace {

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields = {"version", "family", "construction", "n",     "d",
                                               "k",       "r",      "counter_bits", "poly", "matrix"};
  return fields;
}

template <class T>
T get_unsigned(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw UsageError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<T>();
}

std::string get_string(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw UsageError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

SchemeParams params_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("scheme config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known_fields().contains(key)) throw UsageError("unknown config field \"" + key + "\"");
  }
  for (const char* key : {"version", "family", "construction", "n", "d"}) {
    if (!j.contains(key)) throw UsageError(std::string("missing config field \"") + key + "\"");
  }
  if (get_unsigned<int>(j, "version") != kConfigVersion) {
    throw UsageError("unsupported config version (expected 1)");
  }
  SchemeParams p;
  p.family = parse_family(get_string(j, "family"));
  p.construction = get_string(j, "construction");
  p.n = get_unsigned<std::uint64_t>(j, "n");
  p.d = get_unsigned<unsigned>(j, "d");
  if (j.contains("k")) {
    const auto& k = j.at("k");
    if (k.is_string()) {
      if (k.get<std::string>() != "variable") throw UsageError("field \"k\" must be an integer or \"variable\"");
    } else {
      p.k = get_unsigned<unsigned>(j, "k");
    }
  }
  if (j.contains("r")) p.r = get_unsigned<unsigned>(j, "r");
  if (j.contains("counter_bits")) p.counter_bits = get_unsigned<unsigned>(j, "counter_bits");
  if (j.contains("poly")) {
    const auto& v = j.at("poly");
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      std::size_t used = 0;
      try {
        p.poly = std::stoull(s, &used, 0);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) throw UsageError("field \"poly\" is not a number");
    } else {
      p.poly = get_unsigned<std::uint64_t>(j, "poly");
    }
  }
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (!m.is_array()) throw UsageError("field \"matrix\" must be an array of row strings");
    std::vector<std::string> rows;
    for (const auto& row : m) {
      if (!row.is_string()) throw UsageError("field \"matrix\" must be an array of row strings");
      rows.push_back(row.get<std::string>());
    }
    p.matrix = std::move(rows);
  }
  return p;
}

json params_to_json(const SchemeParams& p) {
  json j;
  j["version"] = kConfigVersion;
  j["family"] = to_string(p.family);
  j["construction"] = p.construction;
  j["n"] = p.n;
  j["d"] = p.d;
  if (p.k) {
    j["k"] = *p.k;
  } else {
    j["k"] = "variable";
  }
  j["r"] = p.r;
  j["counter_bits"] = p.counter_bits;
  if (p.poly) j["poly"] = *p.poly;
  if (p.matrix) j["matrix"] = *p.matrix;
  return j;
}

SchemeParams parse_params(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return params_from_json(j);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
}

std::string serialize_params(const SchemeParams& p) { return params_to_json(p).dump(2) + "\n"; }

SchemeParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_params(ss.str());
}

void save_params(const std::filesystem::path& path, const SchemeParams& p) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path.string());
  out << serialize_params(p);
}

std::filesystem::path sidecar_path(const std::filesystem::path& table) {
  return table.string() + ".scheme.json";
}

void save_table(const std::filesystem::path& path, const Table& table) {
  const auto bytes = table.serialize();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out.write(kTableMagic.data(), static_cast<std::streamsize>(kTableMagic.size()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UsageError("write to " + path.string() + " failed");
}

Table load_table(const std::filesystem::path& path, ConfigHandle config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read table " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < kTableMagic.size() ||
      !std::equal(kTableMagic.begin(), kTableMagic.end(), data.begin())) {
    throw UsageError(path.string() + " is not a table file (bad magic)");
  }
  return Table::deserialize(std::move(config),
                            std::span<const std::uint8_t>(data).subspan(kTableMagic.size()));
}

json report_to_json(const VerifyReport& r) {
  json j;
  j["construction"] = r.construction;
  j["n"] = r.n;
  j["d"] = r.d;
  if (r.k) {
    j["k"] = *r.k;
  } else {
    j["k"] = "variable";
  }
  j["property"] = r.property;
  j["instances"] = r.instances;
  j["verdict"] = to_string(r.verdict);
  j["counterexample"] = r.counterexample;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

json bound_row_to_json(const BoundRow& row) {
  json j;
  j["id"] = row.id;
  j["family"] = row.family;
  j["condition"] = row.condition;
  j["source"] = row.source;
  j["formula"] = row.formula;
  j["kind"] = row.kind == BoundKind::kLower ? "lower" : "upper";
  j["bits"] = row.bits;
  if (row.achieved_by) j["achieved_by"] = *row.achieved_by;
  if (row.achieved_bits) j["achieved_bits"] = *row.achieved_bits;
  return j;
}

}  // namespace iblt
