// lutt-quench: density profiles, quasi-particle weight, convergence and verification runs.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_stability = 3;
constexpr int exit_io = 4;

int run(int argc, char** argv) {
  CLI::App app{"Time-evolved density of a fermion added to the non-local Luttinger model ground state",
               quench::tool_name};
  app.set_version_flag("--version", std::string(quench::tool_name) + " " + quench::tool_version);

  std::string command, config_path, t_list, z_range, l_list, window, lambda_range, checks, convention, format, out;
  double lambda = 0, v0 = 0, pf = 0, p_cut = 0, x = 0, z = 0, L = 0, delta = 0, delta_scale = 0, perturb = 0;
  std::size_t n_max = 0, samples = 0;
  bool timings = false;

  app.add_option("command", command, "density | zfactor | scan | convergence | fit-exponent | verify")->required();
  app.add_option("--config", config_path, "JSON run configuration");
  auto* o_lambda = app.add_option("--lambda", lambda, "coupling");
  auto* o_v0 = app.add_option("--v0", v0, "potential strength");
  auto* o_pf = app.add_option("--pF", pf, "Fermi momentum");
  auto* o_pcut = app.add_option("--p-cut", p_cut, "potential cutoff momentum");
  auto* o_conv = app.add_option("--convention", convention, "theorem | angle");
  auto* o_x = app.add_option("--x", x, "position of the added fermion");
  auto* o_z = app.add_option("--z", z, "evaluation point (convergence)");
  auto* o_t = app.add_option("--t", t_list, "times, comma separated");
  auto* o_zr = app.add_option("--z-range", z_range, "z_min,z_max,z_steps");
  auto* o_L = app.add_option("--L", L, "system length (finite volume)");
  auto* o_nmax = app.add_option("--n-max", n_max, "highest mode index");
  auto* o_delta = app.add_option("--delta", delta, "regulator");
  auto* o_dscale = app.add_option("--delta-scale", delta_scale, "delta = scale / L when --delta is absent");
  auto* o_llist = app.add_option("--L-list", l_list, "lengths for convergence, comma separated");
  auto* o_window = app.add_option("--window", window, "fit window t_min,t_max");
  auto* o_samples = app.add_option("--samples", samples, "number of log-spaced fit samples");
  auto* o_lrange = app.add_option("--lambda-range", lambda_range, "scan range a,b,n");
  auto* o_checks = app.add_option("--checks", checks, "verification checks, comma separated");
  auto* o_perturb = app.add_option("--perturb-gamma", perturb, "fault injection into the dual-path check");
  auto* o_timings = app.add_flag("--timings", timings, "include runtimes in the verify report");
  auto* o_out = app.add_option("--out", out, "output path (stdout when absent)");
  auto* o_format = app.add_option("--format", format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "lutt-quench: " << e.what() << "\n";
    return exit_config;
  }

  quench::RunConfig cfg;
  if (!config_path.empty()) quench::load_config_file(cfg, config_path);
  cfg.command = quench::command_from_string(command);
  if (o_lambda->count()) cfg.lambda = lambda;
  if (o_v0->count()) cfg.v0 = v0;
  if (o_pf->count()) cfg.p_F = pf;
  if (o_pcut->count()) cfg.p_cut = p_cut;
  if (o_conv->count()) {
    try {
      cfg.convention = lutt::convention_from_string(convention);
    } catch (const std::invalid_argument& e) {
      throw quench::ConfigError(e.what());
    }
  }
  if (o_x->count()) cfg.x = x;
  if (o_z->count()) cfg.z = z;
  if (o_t->count()) cfg.t = quench::parse_number_list(t_list, "--t");
  if (o_zr->count()) quench::set_range(quench::parse_number_list(z_range, "--z-range"), cfg.z_min, cfg.z_max, cfg.z_steps, "--z-range");
  if (o_L->count()) cfg.L = L;
  if (o_nmax->count()) cfg.n_max = n_max;
  if (o_delta->count()) cfg.delta = delta;
  if (o_dscale->count()) cfg.delta_scale = delta_scale;
  if (o_llist->count()) cfg.L_list = quench::parse_number_list(l_list, "--L-list");
  if (o_window->count()) quench::set_window(quench::parse_number_list(window, "--window"), cfg.t_min, cfg.t_max);
  if (o_samples->count()) cfg.samples = samples;
  if (o_lrange->count())
    quench::set_range(quench::parse_number_list(lambda_range, "--lambda-range"), cfg.lambda_from, cfg.lambda_to,
                      cfg.lambda_steps, "--lambda-range");
  if (o_checks->count()) {
    cfg.checks.clear();
    std::string item;
    for (char c : checks + ",") {
      if (c == ',') {
        if (!item.empty()) cfg.checks.push_back(item);
        item.clear();
      } else if (c != ' ') {
        item += c;
      }
    }
  }
  if (o_perturb->count()) cfg.perturb_gamma = perturb;
  if (o_timings->count()) cfg.timings = timings;
  if (o_out->count()) cfg.out = out;
  if (o_format->count()) cfg.format = quench::format_from_string(format);

  cfg.validate();
  (void)cfg.params(); // stability gate before any work
  if (cfg.command == quench::Command::scan) {
    (void)cfg.params_with_lambda(cfg.lambda_from);
    (void)cfg.params_with_lambda(cfg.lambda_to);
  }
  return quench::dispatch(cfg);
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const quench::ConfigError& e) {
    std::cerr << "lutt-quench: config error: " << e.what() << "\n";
    return exit_config;
  } catch (const lutt::StabilityError& e) {
    std::cerr << "lutt-quench: " << e.what() << "\n";
    return exit_stability;
  } catch (const quench::IoError& e) {
    std::cerr << "lutt-quench: I/O error: " << e.what() << "\n";
    return exit_io;
  } catch (const lutt::Error& e) {
    std::cerr << "lutt-quench: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lutt-quench: invalid input: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "lutt-quench: " << e.what() << "\n";
    return 1;
  }
}
