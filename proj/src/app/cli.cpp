#include "gsense/app/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "gsense/app/commands.hpp"
#include "gsense/errors.hpp"

#ifndef GSENSE_VERSION
#define GSENSE_VERSION "dev"
#endif

namespace gsense::app {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

template <class T>
T parse_item(const std::string& s, const char* what) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof()) {
    throw UsageError(std::string("cannot parse ") + what + " entry '" + s + "'");
  }
  return v;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds, figure datasets and Monte Carlo studies for distributed Gaussian phase sensing",
               "gsense"};
  app.set_version_flag("--version", GSENSE_VERSION);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  RunConfig cfg;
  int modes = 0;
  double nbar_total = 0.0;
  double nbar_mode = 0.0;
  double eta = 1.0;
  std::string weights;
  std::string grid;
  std::string shots;

  auto* opt_m = app.add_option("--M", modes, "number of modes");
  auto* opt_total = app.add_option("--Nbar", nbar_total, "total mean photon number");
  auto* opt_mode = app.add_option("--nbar", nbar_mode, "mean photon number per mode");
  opt_total->excludes(opt_mode);
  auto* opt_eta = app.add_option("--eta", eta, "transmissivity in [0, 1]");
  auto* opt_w = app.add_option("--weights", weights, "comma-separated weights w1,w2,...");
  auto* opt_grid = app.add_option("--grid", grid, "min:max:points[:log]");
  app.add_option("--sweep", cfg.sweep, "variable swept by --grid in bounds")
      ->check(CLI::IsMember({"Nbar", "nbar", "eta"}));
  app.add_option("--out", cfg.out, "output path (default: stdout)");
  app.add_option("--seed", cfg.seed, "RNG master seed");
  app.add_option("--objective", cfg.objective, "average | simultaneous")
      ->check(CLI::IsMember({"average", "simultaneous"}));
  app.add_option("--batches", cfg.batches, "Monte Carlo batches");
  auto* opt_shots = app.add_option("--shots", shots, "comma-separated shots per batch");

  auto* bounds = app.add_subcommand("bounds", "closed-form bounds on a scenario or grid");
  auto* figure = app.add_subcommand("figure", "dataset behind one figure");
  figure->add_option("id", cfg.figure, "fig2 | fig3a | fig3b | fig4a | fig4b | fig5a | fig5b")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"}));
  auto* optimize = app.add_subcommand("optimize", "optimize over the symmetric family");
  auto* simulate = app.add_subcommand("simulate", "homodyne Monte Carlo against the CRB");
  for (auto* sub : {bounds, figure, optimize, simulate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (opt_m->count()) cfg.modes = modes;
    if (opt_total->count()) cfg.total_energy = nbar_total;
    if (opt_mode->count()) cfg.per_mode_energy = nbar_mode;
    if (opt_eta->count()) cfg.eta = eta;
    if (opt_w->count()) {
      for (const auto& s : split_list(weights)) cfg.weights.push_back(parse_item<double>(s, "weights"));
    }
    if (opt_grid->count()) cfg.grid = GridSpec::parse(grid);
    if (opt_shots->count()) {
      cfg.shots.clear();
      for (const auto& s : split_list(shots)) cfg.shots.push_back(parse_item<int>(s, "shots"));
    }

    const CommandResult result = run_command(cfg);
    std::string provenance = std::string("gsense ") + GSENSE_VERSION + " " + cfg.echo();
    if (!result.note.empty()) provenance += " " + result.note;
    provenance += " timestamp=" + utc_timestamp();

    if (cfg.out.empty()) {
      result.table.write(out, provenance);
      if (!result.summary.empty()) err << result.summary << '\n';
    } else {
      std::ostringstream buffer;
      result.table.write(buffer, provenance);
      std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file || !(file << buffer.str()) || !file.flush()) {
        err << "gsense: error: cannot write " << cfg.out << '\n';
        return 1;
      }
      if (!result.summary.empty()) out << result.summary << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    err << "gsense: usage error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "gsense: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gsense: numeric failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gsense::app
