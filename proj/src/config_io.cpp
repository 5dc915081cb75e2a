#include "cylcert/config_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cylcert {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string vec_json(const Vec3d& v) {
  return "[" + format_double(v.x()) + ", " + format_double(v.y()) + ", " + format_double(v.z()) + "]";
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

// 1-based line and column of a byte offset.
std::string position(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Vec3d read_vec(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where, "expected an array of 3 numbers");
  Vec3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) {
      throw ConfigError(where + "[" + std::to_string(i) + "]", "expected a number");
    }
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto it = obj.find(name);
  if (it == obj.end()) throw ConfigError(where, std::string("missing field '") + name + "'");
  return *it;
}

}  // namespace

std::string serialize_config(const LineConfiguration& cfg) {
  std::ostringstream os;
  os << "{\n  \"schema_version\": " << quoted(kSchemaVersion) << ",\n  \"lines\": [";
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    os << (i == 0 ? "\n" : ",\n") << "    {\"label\": " << quoted(cfg.labels()[i])
       << ", \"point\": " << vec_json(cfg[i].touch_point()) << ", \"direction\": " << vec_json(cfg[i].direction())
       << "}";
  }
  os << (cfg.size() ? "\n  ],\n" : "],\n") << "  \"parallel_pairs\": [";
  const auto& pp = cfg.parallel_pairs();
  for (std::size_t i = 0; i < pp.size(); ++i) {
    os << (i == 0 ? "\n" : ",\n") << "    [" << quoted(cfg.labels()[pp[i].first]) << ", "
       << quoted(cfg.labels()[pp[i].second]) << "]";
  }
  os << (pp.empty() ? "]\n" : "\n  ]\n") << "}\n";
  return os.str();
}

LineConfiguration parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(position(text, e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  const auto& ver = field(root, "schema_version", "");
  if (!ver.is_string() || ver.get<std::string>() != kSchemaVersion) {
    throw ConfigError("schema_version", std::string("unsupported schema version, expected \"") + kSchemaVersion + "\"");
  }
  const auto& jl = field(root, "lines", "");
  if (!jl.is_array()) throw ConfigError("lines", "expected an array");
  std::vector<TangentLine<double>> lines;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string where = "lines[" + std::to_string(i) + "]";
    const auto& e = jl[i];
    if (!e.is_object()) throw ConfigError(where, "expected an object");
    const auto& lab = field(e, "label", where);
    if (!lab.is_string()) throw ConfigError(where + ".label", "expected a string");
    const Vec3d p = read_vec(field(e, "point", where), where + ".point");
    const Vec3d d = read_vec(field(e, "direction", where), where + ".direction");
    try {
      lines.emplace_back(p, d);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(where, ex.what());
    }
    labels.push_back(lab.get<std::string>());
  }
  std::vector<IndexPair> pairs;
  if (root.contains("parallel_pairs")) {
    const auto& jp = root["parallel_pairs"];
    if (!jp.is_array()) throw ConfigError("parallel_pairs", "expected an array");
    for (std::size_t i = 0; i < jp.size(); ++i) {
      const std::string where = "parallel_pairs[" + std::to_string(i) + "]";
      const auto& e = jp[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw ConfigError(where, "expected a pair of labels");
      }
      IndexPair ip;
      for (int k = 0; k < 2; ++k) {
        const std::string lab = e[static_cast<std::size_t>(k)].get<std::string>();
        const auto it = std::find(labels.begin(), labels.end(), lab);
        if (it == labels.end()) throw ConfigError(where, "unknown label '" + lab + "'");
        (k == 0 ? ip.first : ip.second) = static_cast<std::size_t>(it - labels.begin());
      }
      pairs.push_back(ip);
    }
  }
  try {
    return LineConfiguration(std::move(lines), std::move(labels), std::move(pairs));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("lines", ex.what());
  }
}

LineConfiguration read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void write_config(const LineConfiguration& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_config(cfg);
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cylcert
