#ifndef LUTT_QUENCH_OUTPUT_HPP
#define LUTT_QUENCH_OUTPUT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace quench {

using ordered_json = nlohmann::ordered_json;

/// 17 significant digits; empty for NaN (excluded cells).
inline std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline ordered_json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

/// A table with metadata, rendered as CSV (metadata as '# ' comment lines) or JSON.
struct Table {
  ordered_json metadata = ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows; ///< NaN renders as an empty cell / null

  std::string csv() const {
    std::string s;
    for (const auto& [k, v] : metadata.items()) s += "# " + k + ": " + v.dump() + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + fmt(r[i]);
      s += "\n";
    }
    return s;
  }

  ordered_json json() const {
    ordered_json j;
    j["metadata"] = metadata;
    j["columns"] = columns;
    ordered_json rs = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row = ordered_json::array();
      for (double v : r) row.push_back(json_number(v));
      rs.push_back(row);
    }
    j["rows"] = rs;
    return j;
  }

  std::string render(Format f) const { return f == Format::csv ? csv() : json().dump(2) + "\n"; }
};

/// Writes to `path`, or to stdout when no path is given.
inline void emit(const std::optional<std::string>& path, const std::string& content) {
  if (!path) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + *path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + *path + "'");
}

/// path with `suffix` inserted before the extension: out.csv -> out_t1.csv.
inline std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

inline std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

inline ordered_json params_json(const lutt::ModelParams& p) {
  ordered_json j;
  j["lambda"] = p.lambda();
  j["v0"] = p.v0();
  j["p_cut"] = p.p_cut();
  j["p_F"] = p.p_F();
  j["v_F"] = lutt::ModelParams::v_F;
  j["convention"] = std::string(lutt::to_string(p.convention()));
  return j;
}

inline ordered_json base_metadata(const RunConfig& cfg, const lutt::ModelParams& p) {
  ordered_json m;
  m["tool"] = tool_name;
  m["version"] = tool_version;
  m["command"] = to_string(cfg.command);
  m["params"] = params_json(p);
  m["omega0"] = lutt::omega0(p);
  m["gamma0"] = lutt::gamma0(p);
  return m;
}

} // namespace quench

#endif
