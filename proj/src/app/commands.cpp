#include "gsense/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsense/errors.hpp"
#include "gsense/estimation.hpp"

namespace gsense::app {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return format_number(v); }
std::string num(int v) { return format_number(static_cast<long long>(v)); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const char* what) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0.0;
  if (!(in >> v) || !(in >> std::ws).eof()) {
    throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
  }
  return v;
}

std::optional<double> energy_of(const RunConfig& cfg, int modes) {
  if (cfg.total_energy && cfg.per_mode_energy) throw UsageError("give only one of --Nbar / --nbar");
  if (cfg.total_energy) return *cfg.total_energy;
  if (cfg.per_mode_energy) return *cfg.per_mode_energy * modes;
  return std::nullopt;
}

int modes_of(const RunConfig& cfg, int fallback) {
  const int m = cfg.modes.value_or(fallback);
  if (m < 1) throw UsageError("--M must be at least 1");
  return m;
}

std::vector<double> grid_or(const RunConfig& cfg, GridSpec fallback) {
  return (cfg.grid ? *cfg.grid : fallback).values();
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + num(v[i]);
  return out;
}

// Rows of `bounds` share this layout.
void add_bounds_row(CsvTable& t, int modes, double energy, double eta) {
  const auto sc = SensingScenario::average_phase(modes, energy, eta);
  const auto lb = lossy_bounds(sc);
  const auto lq = lossy_qfi_bounds(sc);
  const bool live = energy > 0.0 && eta > 0.0;
  const double sql = live ? 1.0 / (4.0 * energy * eta) : kInf;
  double r_opt = kNan;
  double r_hd = kNan;
  if (live) {
    const auto r = enhancement_ratios(sc);
    r_opt = r.r_opt;
    r_hd = r.r_hd;
  }
  t.add_row({num(energy), num(modes), num(eta), num(sql), num(lb.opgs_q), num(lb.oegs_q),
             num(lb.opgs_hd), num(lb.oegs_hd), num(lb.oegs_gd), num(r_opt), num(r_hd),
             num(lq.opgs_q), num(lq.oegs_q)});
}

CommandResult figure2(const RunConfig& cfg) {
  CsvTable t({"M", "N_bar", "sql", "opgs"});
  const auto energies = grid_or(cfg, {0.01, 100.0, 61, true});
  for (int m : {1, 3, 100}) {
    for (double n : energies) {
      const auto u = ultimate_bounds(SensingScenario::average_phase(m, n));
      t.add_row({num(m), num(n), num(u.sql), num(u.opgs)});
    }
  }
  return {std::move(t), "", ""};
}

CommandResult figure3(const RunConfig& cfg, bool simultaneous) {
  const int m = modes_of(cfg, 2);
  if (m < 2) throw UsageError("fig3 needs --M >= 2");
  const double n = energy_of(cfg, m).value_or(2.0);
  if (!(n > 0.0)) throw UsageError("fig3 needs a positive energy");
  const auto objective =
      simultaneous ? SymmetricObjective::Simultaneous : SymmetricObjective::AveragePhase;
  const double r_max = symmetric_family_max_r(n, m);
  std::vector<double> rs = grid_or(cfg, {0.0, r_max, 201, false});
  for (double r : rs) {
    if (r < 0.0 || r > r_max * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "fig3 grid must lie in [0, " << r_max << "]";
      throw UsageError(msg.str());
    }
  }
  const auto best = optimize_symmetric(n, m, objective);
  rs.push_back(best.r);

  const double opgs_ref = simultaneous ? std::pow(m, 3) / (8.0 * n * (n + m)) : m / (8.0 * n * (n + m));
  const double oegs_ref = simultaneous ? m * (2.0 * n * (m - 1) + 2.0 * m - 1.0) / (8.0 * n * (n + 1.0))
                                       : 1.0 / (8.0 * n * (n + 1.0));
  struct Row {
    double r;
    std::string marker;
  };
  std::vector<Row> rows;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    std::string marker;
    if (k + 1 == rs.size()) marker = simultaneous ? "optimum" : "oegs";
    else if (rs[k] == 0.0) marker = "max_entropy";
    rows.push_back({std::min(rs[k], r_max), marker});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.r < b.r; });

  CsvTable t({"r", "nu", "entropy", "bound", "opgs_ref", "oegs_ref", "marker"});
  for (const auto& row : rows) {
    const double nu = symmetric_family_nu(n, m, row.r);
    const auto p = symmetric_family(nu, row.r, m);
    t.add_row({num(row.r), num(nu), num(reduced_entropy(p)),
               num(symmetric_objective_bound(n, m, row.r, objective)), num(opgs_ref),
               num(oegs_ref), row.marker});
  }
  std::ostringstream note;
  note << "note=fig3 uses N_bar=" << num(n) << " M=" << m
       << (cfg.modes || cfg.total_energy || cfg.per_mode_energy ? " (user override)"
                                                               : " (artifact defaults)");
  return {std::move(t), "", note.str()};
}

CommandResult figure4a(const RunConfig& cfg) {
  const double n = energy_of(cfg, modes_of(cfg, 1)).value_or(10.0);
  if (!(n > 0.0)) throw UsageError("fig4a needs a positive energy");
  struct Row {
    double eta;
    bool crossing;
  };
  std::vector<Row> rows;
  for (double eta : grid_or(cfg, {0.01, 1.0, 100, false})) rows.push_back({eta, false});
  for (double eta : hd_gd_crossings(n)) rows.push_back({eta, true});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.eta < b.eta; });
  CsvTable t({"eta", "N_bar", "oegs", "oegs_hd", "oegs_gd", "oegs_qfi", "crossing"});
  for (const auto& row : rows) {
    const auto sc = SensingScenario::average_phase(1, n, row.eta);
    const auto b = lossy_bounds(sc);
    t.add_row({num(row.eta), num(n), num(b.oegs_q), num(b.oegs_hd), num(b.oegs_gd),
               num(lossy_qfi_bounds(sc).oegs_q), row.crossing ? "1" : "0"});
  }
  return {std::move(t), "", ""};
}

CommandResult figure4b(const RunConfig& cfg) {
  CsvTable t({"N_bar", "eta", "ratio_hd_gd", "boundary", "gd_better"});
  const auto energies = grid_or(cfg, {1.0, 100.0, 41, true});
  for (double n : energies) {
    for (int k = 1; k <= 99; ++k) {
      const double eta = k / 100.0;
      const auto b = lossy_bounds(SensingScenario::average_phase(1, n, eta));
      const double ratio = b.oegs_hd / b.oegs_gd;
      t.add_row({num(n), num(eta), num(ratio), num(hd_gd_boundary(eta)), ratio > 1.0 ? "1" : "0"});
    }
  }
  return {std::move(t), "", ""};
}

const std::vector<double> kFig5Etas = {1.0, 0.9, 0.8, 0.7};

CommandResult figure5a(const RunConfig& cfg) {
  const int m = modes_of(cfg, 4);
  CsvTable t({"nbar", "N_bar", "M", "eta", "R_opt", "R_HD"});
  const auto nbars = grid_or(cfg, {0.05, 20.0, 400, true});
  for (double eta : kFig5Etas) {
    for (double nb : nbars) {
      if (!(nb > 0.0)) throw UsageError("fig5a grid must be positive");
      const auto r = enhancement_ratios(SensingScenario::from_per_mode(m, nb, eta));
      t.add_row({num(nb), num(m * nb), num(m), num(eta), num(r.r_opt), num(r.r_hd)});
    }
  }
  return {std::move(t), "", ""};
}

CommandResult figure5b(const RunConfig& cfg) {
  if (cfg.total_energy) throw UsageError("fig5b takes --nbar, not --Nbar");
  const double nb = cfg.per_mode_energy.value_or(6.0);
  if (!(nb > 0.0)) throw UsageError("fig5b needs a positive --nbar");
  std::vector<int> ms;
  for (double v : grid_or(cfg, {1.0, 50.0, 50, false})) {
    const int m = static_cast<int>(std::lround(v));
    if (m < 1) throw UsageError("fig5b grid must contain mode counts >= 1");
    if (ms.empty() || ms.back() != m) ms.push_back(m);
  }
  CsvTable t({"M", "nbar", "N_bar", "eta", "R_opt", "R_HD"});
  for (double eta : kFig5Etas) {
    for (int m : ms) {
      const auto r = enhancement_ratios(SensingScenario::from_per_mode(m, nb, eta));
      t.add_row({num(m), num(nb), num(m * nb), num(eta), num(r.r_opt), num(r.r_hd)});
    }
  }
  return {std::move(t), "", ""};
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw UsageError("grid must be min:max:points[:log], got '" + text + "'");
  }
  GridSpec g;
  g.min = parse_double(parts[0], "grid min");
  g.max = parse_double(parts[1], "grid max");
  const double pts = parse_double(parts[2], "grid points");
  if (pts != std::floor(pts) || pts < 2 || pts > 1e7) {
    throw UsageError("grid points must be an integer >= 2");
  }
  g.points = static_cast<int>(pts);
  if (parts.size() == 4) {
    if (parts[3] != "log") throw UsageError("grid scale must be 'log' when given");
    g.log = true;
  }
  if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.min < g.max)) {
    throw UsageError("grid needs finite min < max");
  }
  if (g.log && !(g.min > 0.0)) throw UsageError("log grid needs min > 0");
  return g;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v(points);
  for (int k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) / (points - 1);
    v[k] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
               : min + t * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

std::string RunConfig::echo() const {
  std::ostringstream o;
  o << "command=" << command;
  if (!figure.empty()) o << " figure=" << figure;
  if (modes) o << " M=" << *modes;
  if (total_energy) o << " Nbar=" << num(*total_energy);
  if (per_mode_energy) o << " nbar=" << num(*per_mode_energy);
  if (eta) o << " eta=" << num(*eta);
  if (!weights.empty()) o << " weights=" << join_doubles(weights);
  if (grid) {
    o << " grid=" << num(grid->min) << ':' << num(grid->max) << ':' << grid->points
      << (grid->log ? ":log" : "");
  }
  if (command == "bounds") o << " sweep=" << sweep;
  if (command == "optimize") o << " objective=" << objective;
  if (command == "simulate") {
    o << " batches=" << batches << " shots=";
    for (std::size_t i = 0; i < shots.size(); ++i) o << (i ? ";" : "") << shots[i];
  }
  o << " seed=" << seed;
  return o.str();
}

CommandResult run_bounds(const RunConfig& cfg) {
  const int m = modes_of(cfg, 1);
  if (!cfg.weights.empty()) {
    if (static_cast<int>(cfg.weights.size()) != m) throw UsageError("--weights needs M entries");
    if (!WeightVector::normalized(cfg.weights).is_uniform(1e-12)) {
      throw UsageError("bounds closed forms assume uniform weights");
    }
  }
  std::vector<double> energies;
  std::vector<double> etas = {cfg.eta.value_or(1.0)};
  const auto energy = energy_of(cfg, m);
  if (cfg.grid) {
    const auto values = cfg.grid->values();
    if (cfg.sweep == "Nbar" || cfg.sweep == "nbar") {
      if (energy) throw UsageError("--grid sweeps the energy; drop --Nbar / --nbar");
      for (double v : values) energies.push_back(cfg.sweep == "Nbar" ? v : v * m);
    } else if (cfg.sweep == "eta") {
      if (cfg.eta) throw UsageError("--grid sweeps eta; drop --eta");
      if (!energy) throw UsageError("bounds needs --Nbar or --nbar");
      energies = {*energy};
      etas = values;
    } else {
      throw UsageError("--sweep must be Nbar, nbar or eta");
    }
  } else {
    if (!energy) throw UsageError("bounds needs --Nbar or --nbar");
    energies = {*energy};
  }
  CsvTable t({"N_bar", "M", "eta", "sql", "opgs", "oegs", "opgs_hd", "oegs_hd", "oegs_gd", "R_opt",
              "R_HD", "opgs_qfi", "oegs_qfi"});
  for (double eta : etas) {
    for (double n : energies) add_bounds_row(t, m, n, eta);
  }
  return {std::move(t), "", ""};
}

CommandResult run_figure(const RunConfig& cfg) {
  if (cfg.figure == "fig2") return figure2(cfg);
  if (cfg.figure == "fig3a") return figure3(cfg, false);
  if (cfg.figure == "fig3b") return figure3(cfg, true);
  if (cfg.figure == "fig4a") return figure4a(cfg);
  if (cfg.figure == "fig4b") return figure4b(cfg);
  if (cfg.figure == "fig5a") return figure5a(cfg);
  if (cfg.figure == "fig5b") return figure5b(cfg);
  throw UsageError("unknown figure id '" + cfg.figure + "'");
}

CommandResult run_optimize(const RunConfig& cfg) {
  const int m = modes_of(cfg, 2);
  const auto energy = energy_of(cfg, m);
  if (!energy) throw UsageError("optimize needs --Nbar or --nbar");
  const double n = *energy;
  SymmetricObjective objective;
  double reference;
  if (cfg.objective == "average") {
    objective = SymmetricObjective::AveragePhase;
    reference = 1.0 / (8.0 * n * (n + 1.0));
  } else if (cfg.objective == "simultaneous") {
    objective = SymmetricObjective::Simultaneous;
    reference = std::pow(m, 3) / (8.0 * n * (n + m));
  } else {
    throw UsageError("--objective must be average or simultaneous");
  }
  const auto best = optimize_symmetric(n, m, objective);
  const double gap = std::abs(best.bound - reference);
  CsvTable t({"objective", "M", "N_bar", "r", "nu", "gamma1", "gamma2", "eps1", "eps2", "bound",
              "reference", "gap"});
  const auto& p = best.params;
  t.add_row({cfg.objective, num(m), num(n), num(best.r), num(best.nu), num(p.gamma1()),
             num(p.gamma2()), num(p.eps1()), num(p.eps2()), num(best.bound), num(reference),
             num(gap)});
  std::ostringstream s;
  s << "optimize " << cfg.objective << ": r=" << num(best.r) << " bound=" << num(best.bound)
    << " reference=" << num(reference) << " gap=" << num(gap);
  return {std::move(t), s.str(), ""};
}

CommandResult run_simulate(const RunConfig& cfg) {
  const int m = modes_of(cfg, 3);
  const double n = energy_of(cfg, m).value_or(3.0);
  auto sc = SensingScenario::average_phase(m, n, cfg.eta.value_or(1.0));
  if (!cfg.weights.empty()) {
    if (static_cast<int>(cfg.weights.size()) != m) throw UsageError("--weights needs M entries");
    sc.weights = WeightVector::normalized(cfg.weights);
  }
  if (cfg.batches < 2) throw UsageError("--batches must be at least 2");
  if (cfg.shots.empty()) throw UsageError("--shots needs at least one value");
  for (int s : cfg.shots) {
    if (s < 1) throw UsageError("--shots values must be >= 1");
  }
  const auto rows = crb_saturation_study(sc, cfg.batches, cfg.shots, cfg.seed);
  CsvTable t({"shots", "empirical_var", "crb", "ratio", "ci_low", "ci_high", "seed", "wide_ci",
              "failures"});
  for (const auto& r : rows) {
    t.add_row({num(r.shots), num(r.empirical_var), num(r.crb), num(r.ratio), num(r.ci_low),
               num(r.ci_high), std::to_string(cfg.seed),
               r.wide_ci ? "1" : "0", num(r.failures)});
  }
  return {std::move(t), "", ""};
}

CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "bounds") return run_bounds(cfg);
  if (cfg.command == "figure") return run_figure(cfg);
  if (cfg.command == "optimize") return run_optimize(cfg);
  if (cfg.command == "simulate") return run_simulate(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace gsense::app
