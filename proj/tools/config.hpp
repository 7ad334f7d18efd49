#ifndef LUTT_QUENCH_CONFIG_HPP
#define LUTT_QUENCH_CONFIG_HPP

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lutt/lutt.hpp"

namespace quench {

inline constexpr const char* tool_name = "lutt-quench";
inline constexpr const char* tool_version = "1.0.0";

/// Invalid or inconsistent run configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing files failed (exit code 4).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Command { density, zfactor, scan, convergence, fit_exponent, verify };
enum class Format { csv, json };

inline Command command_from_string(const std::string& s) {
  if (s == "density") return Command::density;
  if (s == "zfactor") return Command::zfactor;
  if (s == "scan") return Command::scan;
  if (s == "convergence") return Command::convergence;
  if (s == "fit-exponent") return Command::fit_exponent;
  if (s == "verify") return Command::verify;
  throw ConfigError("unknown command '" + s + "'");
}

inline std::string to_string(Command c) {
  switch (c) {
  case Command::density: return "density";
  case Command::zfactor: return "zfactor";
  case Command::scan: return "scan";
  case Command::convergence: return "convergence";
  case Command::fit_exponent: return "fit-exponent";
  case Command::verify: return "verify";
  }
  return "?";
}

inline Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names{"free_reduction", "dual_path",        "cin_quadrature",
                                              "z_quadrature",   "q_closed_form",    "poisson_identity",
                                              "finite_to_infinite"};
  return names;
}

struct RunConfig {
  Command command = Command::verify;

  // model
  double lambda = 1.0;
  double v0 = lutt::pi;
  double p_F = 0.0;
  double p_cut = 1.0;
  lutt::Convention convention = lutt::Convention::theorem;

  // grids
  double x = 0.0;
  std::optional<double> z; ///< single evaluation point (convergence), default x - 5
  double z_min = -10.0;
  double z_max = 10.0;
  std::size_t z_steps = 201;
  std::vector<double> t{1.0};

  // finite volume
  std::optional<double> L;
  std::optional<std::size_t> n_max;
  std::optional<double> delta;
  double delta_scale = 10.0; ///< delta = delta_scale / L when delta is not given
  std::vector<double> L_list{500.0, 1000.0, 2000.0, 4000.0};

  // fit-exponent
  double t_min = 10.0;
  double t_max = 1000.0;
  std::size_t samples = 64;

  // scan
  double lambda_from = -1.0;
  double lambda_to = 1.0;
  std::size_t lambda_steps = 5;

  // verify
  std::vector<std::string> checks = all_checks();
  double perturb_gamma = 0.0;
  bool timings = false;

  // output
  std::optional<std::string> out;
  std::optional<Format> format; ///< default: json for verify, csv otherwise

  Format output_format() const { return format.value_or(command == Command::verify ? Format::json : Format::csv); }

  lutt::ModelParams params() const { return lutt::ModelParams(lambda, v0, convention, p_F, p_cut); }
  lutt::ModelParams params_with_lambda(double l) const { return lutt::ModelParams(l, v0, convention, p_F, p_cut); }

  double point_z() const { return z.value_or(x - 5.0); }

  double delta_for(double length) const { return delta.value_or(delta_scale / length); }

  lutt::ModeGrid grid_for(double length) const {
    const double d = delta_for(length);
    if (n_max) return lutt::ModeGrid(length, *n_max, d);
    return lutt::ModeGrid::covering(length, d, p_cut);
  }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(x) || !finite(z_min) || !finite(z_max)) throw ConfigError("positions must be finite");
    if (z_steps < 2) throw ConfigError("z_steps must be >= 2 (got " + std::to_string(z_steps) + ")");
    if (!(z_max > z_min)) throw ConfigError("z range must satisfy z_min < z_max");
    if (t.empty()) throw ConfigError("t list is empty");
    for (double v : t)
      if (!finite(v) || v < 0.0) throw ConfigError("t values must be finite and >= 0");
    if (L && !(*L > 0.0)) throw ConfigError("L must be > 0");
    if (delta && !(*delta > 0.0)) throw ConfigError("delta must be > 0");
    if (n_max && *n_max < 1) throw ConfigError("n_max must be >= 1");
    if (!(delta_scale > 0.0)) throw ConfigError("delta_scale must be > 0");
    if (L_list.empty()) throw ConfigError("L_list is empty");
    for (double v : L_list)
      if (!(v > 0.0)) throw ConfigError("L_list entries must be > 0");
    if (!(t_min > 0.0) || !(t_max > t_min)) throw ConfigError("fit window must satisfy 0 < t_min < t_max");
    if (samples < 2) throw ConfigError("samples must be >= 2");
    if (lambda_steps < 1) throw ConfigError("lambda_range needs at least one value");
    if (checks.empty()) throw ConfigError("check list is empty");
    for (const auto& c : checks) {
      bool known = false;
      for (const auto& k : all_checks()) known = known || (k == c);
      if (!known) throw ConfigError("unknown check '" + c + "'");
    }
    if (!finite(perturb_gamma)) throw ConfigError("perturb_gamma must be finite");
  }
};

namespace detail {

inline std::size_t as_count(double v, const char* what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e12)
    throw ConfigError(std::string(what) + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline std::vector<double> number_list(const nlohmann::json& j, const char* what) {
  std::vector<double> v;
  if (j.is_number()) {
    v.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_number()) throw ConfigError(std::string(what) + " must contain numbers");
      v.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(std::string(what) + " must be a number or an array of numbers");
  }
  return v;
}

inline double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return j.get<double>();
}

} // namespace detail

/// Comma-separated list of numbers, e.g. "0,1,3".
inline std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + item + "' as a number");
    }
  }
  if (v.empty()) throw ConfigError(std::string(what) + ": empty list");
  return v;
}

inline void set_range(const std::vector<double>& v, double& lo, double& hi, std::size_t& n, const char* what) {
  if (v.size() != 3) throw ConfigError(std::string(what) + " expects three values a,b,n");
  lo = v[0];
  hi = v[1];
  n = detail::as_count(v[2], what);
}

inline void set_window(const std::vector<double>& v, double& lo, double& hi) {
  if (v.size() != 2) throw ConfigError("window expects two values t_min,t_max");
  lo = v[0];
  hi = v[1];
}

/// Applies the keys of a JSON config object. Unknown keys are an error.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "command") {
      if (!val.is_string()) throw ConfigError("command must be a string");
      cfg.command = command_from_string(val.get<std::string>());
    } else if (key == "lambda") {
      cfg.lambda = detail::number(val, "lambda");
    } else if (key == "v0") {
      cfg.v0 = detail::number(val, "v0");
    } else if (key == "pF") {
      cfg.p_F = detail::number(val, "pF");
    } else if (key == "p_cut") {
      cfg.p_cut = detail::number(val, "p_cut");
    } else if (key == "convention") {
      if (!val.is_string()) throw ConfigError("convention must be a string");
      try {
        cfg.convention = lutt::convention_from_string(val.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "x") {
      cfg.x = detail::number(val, "x");
    } else if (key == "z") {
      cfg.z = detail::number(val, "z");
    } else if (key == "z_range") {
      set_range(detail::number_list(val, "z_range"), cfg.z_min, cfg.z_max, cfg.z_steps, "z_range");
    } else if (key == "t") {
      cfg.t = detail::number_list(val, "t");
    } else if (key == "L") {
      cfg.L = detail::number(val, "L");
    } else if (key == "n_max") {
      cfg.n_max = detail::as_count(detail::number(val, "n_max"), "n_max");
    } else if (key == "delta") {
      cfg.delta = detail::number(val, "delta");
    } else if (key == "delta_scale") {
      cfg.delta_scale = detail::number(val, "delta_scale");
    } else if (key == "L_list") {
      cfg.L_list = detail::number_list(val, "L_list");
    } else if (key == "window") {
      set_window(detail::number_list(val, "window"), cfg.t_min, cfg.t_max);
    } else if (key == "samples") {
      cfg.samples = detail::as_count(detail::number(val, "samples"), "samples");
    } else if (key == "lambda_range") {
      set_range(detail::number_list(val, "lambda_range"), cfg.lambda_from, cfg.lambda_to, cfg.lambda_steps,
                "lambda_range");
    } else if (key == "checks") {
      if (!val.is_array()) throw ConfigError("checks must be an array of names");
      cfg.checks.clear();
      for (const auto& c : val) {
        if (!c.is_string()) throw ConfigError("checks must be an array of names");
        cfg.checks.push_back(c.get<std::string>());
      }
    } else if (key == "perturb_gamma") {
      cfg.perturb_gamma = detail::number(val, "perturb_gamma");
    } else if (key == "timings") {
      if (!val.is_boolean()) throw ConfigError("timings must be true or false");
      cfg.timings = val.get<bool>();
    } else if (key == "out") {
      if (!val.is_string()) throw ConfigError("out must be a string");
      cfg.out = val.get<std::string>();
    } else if (key == "format") {
      if (!val.is_string()) throw ConfigError("format must be a string");
      cfg.format = format_from_string(val.get<std::string>());
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  apply_json(cfg, j);
}

} // namespace quench

#endif
