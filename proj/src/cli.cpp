#include "lutt2d/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>
#include <unistd.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lutt2d/antinodal_mf.hpp"
#include "lutt2d/fock_verify.hpp"
#include "lutt2d/model_core.hpp"
#include "lutt2d/nodal_boson.hpp"
#include "lutt2d/tv_ed.hpp"
#include "lutt2d/zone_partition.hpp"

#ifndef LUTT2D_VERSION
#define LUTT2D_VERSION "unknown"
#endif

namespace lutt2d {

namespace {

using Json = nlohmann::ordered_json;

/// Thrown for command-level usage problems that CLI11 cannot detect.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest representation that round-trips exactly.
std::string format_value(double v) { return fmt::format("{}", v); }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(const std::string& v) { return v; }
std::string format_value(bool v) { return v ? "true" : "false"; }

struct RunConfig {
  // Microscopic parameters.
  double t = 1.0;
  double V = 2.0;
  double a = 1.0;
  int cells = 9;
  double nu = 0.55;
  // Output and execution.
  std::string output = "-";
  int seed = 0x5eed;
  int threads = 0;
  // ed
  int n1 = 4;
  int n2 = 4;
  int particles = -1;
  double mu = 0.0;
  bool ph = false;
  int levels = 8;
  // dispersion
  int grid = 64;
  double gamma = -1.0;
  bool gamma_from_params = false;
  std::string source = "closed-form";
  // free-energy
  int boson_cells = 0;
  std::string temperatures = "0,0.1,0.5,1";
  // gap
  double T = 0.0;
  int q_count = 0;
  double q_halfwidth = 0.5;
  double damping = 0.5;
  double kernel_prefactor = 1.0;
  double delta0 = -1.0;
  // verify
  std::string check = "schwinger";
  int modes = 10;
  int margin = 3;
  int transverse = 1;
  int branch_r = 1;
  int branch_s = 1;
  double energy_cap = 0.0;
  int max_states = 20000;
};

/// Options of one subcommand with serializers in registration order.
class OptionTable {
 public:
  explicit OptionTable(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    entries_.emplace_back(name, [&var] { return format_value(var); });
    return app_->add_option("--" + name, var, help);
  }
  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    entries_.emplace_back(name, [&var] { return format_value(var); });
    flags_.push_back(name);
    return app_->add_flag("--" + name, var, help);
  }

  bool has(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.first == name) return true;
    return false;
  }
  bool is_flag(const std::string& name) const { return std::find(flags_.begin(), flags_.end(), name) != flags_.end(); }
  CLI::App* app() const { return app_; }

  std::vector<std::pair<std::string, std::string>> resolved() const {
    std::vector<std::pair<std::string, std::string>> out;
    // The destination is not part of the run, so replays reproduce the file.
    for (const auto& [k, f] : entries_)
      if (k != "output") out.emplace_back(k, f());
    return out;
  }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<std::string()>>> entries_;
  std::vector<std::string> flags_;
};

void add_common(OptionTable& o, RunConfig& c) {
  o.add("t", c.t, "hopping t");
  o.add("V", c.V, "nearest-neighbour repulsion V");
  o.add("a", c.a, "lattice constant a");
  o.add("cells", c.cells, "L/ã (odd)");
  o.add("nu", c.nu, "filling ν (rounded to the commensurate grid)");
  o.add("output", c.output, "output path, '-' for stdout");
  o.add("seed", c.seed, "random seed (property sampling only)");
  o.add("threads", c.threads, "worker thread cap (0 = runtime default)");
}

struct Output {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;

  Json envelope(Json result) const {
    Json j;
    j["version"] = version();
    j["command"] = command;
    Json cfg = Json::object();
    cfg["command"] = command;
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    j["result"] = std::move(result);
    return j;
  }

  std::string csv_header(const std::vector<std::pair<std::string, std::string>>& info) const {
    std::string out = fmt::format("# version = {}\n# config.command = {}\n", version(), command);
    for (const auto& [k, v] : config) out += fmt::format("# config.{} = {}\n", k, v);
    for (const auto& [k, v] : info) out += fmt::format("# {} = {}\n", k, v);
    return out;
  }
};

void write_atomic(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string tmp = fmt::format("{}.tmp.{}", path, static_cast<long>(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError(fmt::format("cannot open {} for writing", tmp));
    f << text;
    f.flush();
    if (!f) throw DomainError(fmt::format("write to {} failed", tmp));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DomainError(fmt::format("cannot rename {} to {}: {}", tmp, path, ec.message()));
  }
}

std::string csv(double v) { return fmt::format("{:.17g}", v); }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("cannot parse '{}' as a number", item));
    }
  }
  if (out.empty()) throw UsageError("empty temperature list");
  return out;
}

Json params_json(const MicroParams& mp, const EffectiveParams& eff) {
  Json j;
  j["t"] = eff.t;
  j["V"] = eff.V;
  j["a"] = eff.a;
  j["cells"] = mp.cells();
  j["nu_requested"] = mp.nu_requested();
  j["nu"] = mp.nu();
  j["nu_rounding"] = mp.nu_rounding();
  j["q_steps"] = mp.q_steps();
  j["Q"] = eff.Q;
  j["a_tilde"] = eff.a_tilde();
  j["L"] = mp.L();
  j["sites"] = mp.sites();
  j["v_F"] = eff.v_F;
  j["c_F"] = eff.c_F;
  j["g1"] = eff.g1;
  j["g2"] = eff.g2;
  j["g3"] = eff.g3;
  j["g4"] = eff.g4;
  j["mu_a"] = eff.mu_a;
  j["mu"] = eff.mu;
  j["gamma"] = eff.gamma;
  j["stability_bound_V"] = stability_bound(eff.t, eff.Q);
  j["stability"] = eff.stability == Stability::stable ? "stable" : "unstable";
  if (eff.stability == Stability::stable) {
    const auto [g3, g4] = effective_antinodal_couplings(eff);
    j["g3_eff"] = g3;
    j["g4_eff"] = g4;
  }
  return j;
}

/// Overrides γ (and the g1, g2 that define it) when requested.
EffectiveParams with_gamma(EffectiveParams eff, double gamma) {
  if (gamma < 0.0) return eff;
  eff.gamma = gamma;
  eff.g1 = gamma * kPi * eff.a_tilde() * eff.v_F;
  eff.g2 = 0.5 * eff.g1;
  eff.stability = gamma < 1.0 ? Stability::stable : Stability::unstable;
  return eff;
}

Json report_json(const VerifyReport& r) {
  Json j;
  j["check"] = r.check;
  Json dims = Json::object();
  for (const auto& [k, v] : r.dims) dims[k] = v;
  j["dims"] = dims;
  j["max_residual"] = r.max_residual;
  j["levels_compared"] = r.levels_compared;
  j["pass"] = r.pass;
  j["detail"] = r.detail;
  if (!r.levels_lhs.empty()) {
    j["levels_fermionic"] = r.levels_lhs;
    j["levels_bosonic"] = r.levels_rhs;
    j["degeneracies"] = r.degeneracies;
  }
  return j;
}

int cmd_params(const RunConfig& c, const Output& out) {
  const MicroParams mp(c.t, c.V, c.a, c.cells, c.nu);
  Json j = params_json(mp, derive_effective_params(mp));
  // Closed forms at the requested filling, before commensurate rounding.
  const EffectiveParams exact = effective_params_at(c.t, c.V, c.a, kPi * c.nu);
  Json u;
  u["Q"] = exact.Q;
  u["v_F"] = exact.v_F;
  u["c_F"] = exact.c_F;
  u["g1"] = exact.g1;
  u["g2"] = exact.g2;
  u["g3"] = exact.g3;
  u["g4"] = exact.g4;
  u["mu_a"] = exact.mu_a;
  u["mu"] = exact.mu;
  u["gamma"] = exact.gamma;
  u["stability"] = exact.stability == Stability::stable ? "stable" : "unstable";
  j["unrounded"] = u;
  write_atomic(c.output, out.envelope(j).dump(2) + "\n");
  return 0;
}

int cmd_partition(const RunConfig& c, const Output& out) {
  const MicroParams mp(c.t, c.V, c.a, c.cells, c.nu);
  const ZonePartition zp(mp.cells(), mp.q_steps());
  const RegionMap map(zp);
  const auto sizes = map.region_sizes();
  const auto nus = filling_fractions(mp.Q());
  std::vector<std::pair<std::string, std::string>> info{{"Q", csv(mp.Q())}, {"q_steps", std::to_string(mp.q_steps())}};
  long total = 0;
  for (int i = 0; i < kRegionCount; ++i) {
    const std::string name = to_string(all_regions()[i]);
    info.emplace_back("size" + name, std::to_string(sizes[static_cast<std::size_t>(i)]));
    info.emplace_back("filling" + name, csv(nus[static_cast<std::size_t>(i)]));
    total += sizes[static_cast<std::size_t>(i)];
  }
  info.emplace_back("sites", std::to_string(mp.sites()));
  info.emplace_back("exact_cover", total == mp.sites() ? "true" : "false");
  std::string text = out.csv_header(info);
  text += "k1,k2,r,s,kp_plus,kp_minus\n";
  for (std::size_t i = 0; i < map.points().size(); ++i) {
    const Momentum k = zp.grid().to_momentum(map.points()[i], c.a);
    const Classification& cl = map.classes()[i];
    const Momentum local = zp.grid().to_momentum(cl.local, c.a);
    text += fmt::format("{},{},{},{},{},{}\n", csv(k.k1()), csv(k.k2()), cl.region.r, cl.region.s, csv(local.k_plus),
                        csv(local.k_minus));
  }
  write_atomic(c.output, text);
  return 0;
}

int cmd_ed(const RunConfig& c, const Output& out) {
  const LatticeSpec lattice{c.n1, c.n2};
  lattice.validate();
  const int particles = c.particles < 0 ? lattice.sites() / 2 : c.particles;
  if (particles > lattice.sites()) throw DomainError(fmt::format("{} particles exceed {} sites", particles, lattice.sites()));
  const TvCouplings tv{c.t, c.V, c.mu};
  HtvOptions opts;
  opts.sector = particles;
  const TvOperator op = build_htv(lattice, tv, opts);
  LanczosOptions lopts;
  lopts.seed = static_cast<std::uint64_t>(c.seed);
  const GroundState gs = ground_state(op, 1e-8, lopts);
  Json j;
  j["lattice"] = {{"n1", lattice.n1}, {"n2", lattice.n2}, {"sites", lattice.sites()}};
  j["params"] = {{"t", c.t}, {"V", c.V}, {"mu", c.mu}, {"bond_coupling", bond_interaction(c.V)}};
  j["sector"] = {{"particles", particles}, {"dimension", op.basis.size()}};
  j["energy"] = gs.energy;
  j["degeneracy"] = gs.degeneracy;
  j["cdw_order"] = cdw_order(gs, op);
  j["residual"] = gs.residual;
  if (c.ph) {
    const PhReport ph = ph_transform_check(lattice, tv, particles, c.levels);
    Json p;
    p["pass"] = ph.pass;
    p["levels_compared"] = ph.levels_compared;
    p["constant_shift"] = ph.constant_shift;
    p["max_deviation"] = ph.max_deviation;
    j["particle_hole"] = p;
  }
  write_atomic(c.output, out.envelope(j).dump(2) + "\n");
  return 0;
}

int cmd_dispersion(const RunConfig& c, const Output& out) {
  if (c.grid < 1) throw UsageError("--grid must be >= 1");
  if (c.gamma_from_params && c.gamma >= 0.0) throw UsageError("--gamma-from-params conflicts with --gamma");
  const MicroParams mp(c.t, c.V, c.a, c.cells, c.nu);
  const EffectiveParams eff = with_gamma(derive_effective_params(mp), c.gamma);
  const double kappa = measure_calibration(eff.v_F, eff.a);
  const AntinodalGrid g{c.grid, c.a};
  std::string text = out.csv_header({{"gamma", csv(eff.gamma)}, {"v_F", csv(eff.v_F)}, {"kappa", csv(kappa)}});
  const bool numeric = c.source == "numeric";
  if (!numeric && c.source != "closed-form") throw UsageError(fmt::format("unknown source '{}' (closed-form, numeric)", c.source));
  text += "p_plus,p_minus,omega_plus,omega_minus,source\n";
  for (int i = 0; i < c.grid; ++i)
    for (int j = 0; j < c.grid; ++j) {
      const Momentum p{g.k(j), g.k(i)};
      const DispersionResult d = numeric ? numeric_dispersion(p, eff) : closed_form_dispersion(p, eff);
      text += fmt::format("{},{},{},{},{}\n", csv(p.k_plus), csv(p.k_minus), csv(d.omega_plus), csv(d.omega_minus),
                          to_string(d.source));
    }
  write_atomic(c.output, text);
  return 0;
}

int cmd_free_energy(const RunConfig& c, const Output& out) {
  const MicroParams mp(c.t, c.V, c.a, c.cells, c.nu);
  const EffectiveParams eff = with_gamma(derive_effective_params(mp), c.gamma);
  const BosonGrid grid{c.boson_cells > 0 ? c.boson_cells : c.cells, c.a};
  const ThermoResult r = free_energy(eff, grid, parse_list(c.temperatures));
  Json j;
  j["E_n"] = r.E_n;
  j["gamma"] = eff.gamma;
  j["grid_cells"] = r.grid_cells;
  j["window"] = r.window;
  j["modes"] = r.modes;
  j["zero_modes"] = r.zero_modes;
  j["frequency_convention"] = r.frequency_convention;
  j["normal_ordering"] = r.normal_ordering;
  Json table = Json::array();
  for (const auto& [T, F] : r.table) table.push_back({{"T", T}, {"F", F}});
  j["table"] = table;
  write_atomic(c.output, out.envelope(j).dump(2) + "\n");
  return 0;
}

int cmd_gap(const RunConfig& c, const Output& out) {
  const AntinodalGrid grid{c.grid, c.a};
  GapOptions opts;
  opts.T = c.T;
  opts.damping = c.damping;
  opts.kernel_prefactor = c.kernel_prefactor;
  opts.delta0 = c.delta0;
  std::vector<double> Qs;
  if (c.q_count > 0) {
    if (!(c.q_halfwidth > 0.0 && c.q_halfwidth < kPi / 4.0)) throw UsageError("--q-halfwidth must lie in (0, π/4)");
    for (int i = 0; i < c.q_count; ++i)
      Qs.push_back(c.q_count == 1 ? kPi / 2.0
                                  : kPi / 2.0 + c.q_halfwidth * (2.0 * i - (c.q_count - 1)) / (c.q_count - 1));
  } else {
    Qs.push_back(MicroParams(c.t, c.V, c.a, c.cells, c.nu).Q());
  }
  const GapScan scan = gap_phase_scan(c.t, c.V, c.a, Qs, grid, opts);
  std::string text = out.csv_header({{"threshold", csv(scan.threshold)},
                                     {"gapped_interval_found", scan.interval_found ? "true" : "false"},
                                     {"gapped_Q_low", csv(scan.Q_low)},
                                     {"gapped_Q_high", csv(scan.Q_high)}});
  text += "Q,V,T,Delta,filling,iterations,residual,dfilling_dmu,gapped\n";
  for (const auto& r : scan.rows)
    text += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv(r.Q), csv(r.V), csv(r.T), csv(r.Delta), csv(r.filling),
                        r.iterations, csv(r.residual), csv(r.dfilling_dmu), r.gapped ? 1 : 0);
  write_atomic(c.output, text);
  return 0;
}

int cmd_verify(const RunConfig& c, const Output& out) {
  TruncationSpec spec;
  spec.longitudinal_modes = c.modes;
  spec.margin = c.margin;
  spec.transverse = c.transverse;
  VerifyReport rep;
  SpectralOptions sopts;
  sopts.energy_cap = c.energy_cap > 0.0 ? c.energy_cap : std::numeric_limits<double>::infinity();
  if (c.check == "schwinger") {
    SchwingerOptions o;
    o.max_states = c.max_states;
    rep = schwinger_scan(TruncatedChiralSpace(spec), o);
  } else if (c.check == "theorem-a") {
    rep = theorem_a_identities(TruncatedChiralSpace(spec));
  } else if (c.check == "kronig") {
    spec.branches = {{c.branch_r, c.branch_s}};
    rep = kronig_check(TruncatedChiralSpace(spec), c.branch_r, c.branch_s, sopts);
  } else if (c.check == "hn") {
    const MicroParams mp(c.t, c.V, c.a, c.cells, c.nu);
    const EffectiveParams eff = with_gamma(derive_effective_params(mp), c.gamma);
    sopts.levels = c.levels;
    sopts.tolerance = 1e-8;
    rep = hn_equivalence_check(eff, TruncatedChiralSpace(spec), sopts);
  } else {
    throw UsageError(fmt::format("unknown check '{}' (schwinger, theorem-a, kronig, hn)", c.check));
  }
  write_atomic(c.output, out.envelope(report_json(rep)).dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* version() { return LUTT2D_VERSION; }

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError(fmt::format("cannot read config file {}", path));
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  std::map<std::string, std::string> out;
  if (!trim(text).empty() && trim(text).front() == '{') {
    const Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("config") || !j["config"].is_object())
      throw UsageError(fmt::format("{}: JSON config needs a \"config\" object", path));
    for (const auto& [k, v] : j["config"].items()) out[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return out;
  }
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::string body = trim(line);
    if (body.rfind("# config.", 0) == 0)
      body = body.substr(9);
    else if (body.empty() || body.front() == '#')
      continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      // Data rows of an emitted CSV follow the header; stop there.
      if (line.find(',') != std::string::npos) break;
      throw UsageError(fmt::format("{}: expected key = value, got '{}'", path, body));
    }
    out[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return out;
}

int run(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"Nodal/antinodal effective model of the 2D t-V model"};
  app.set_version_flag("--version", std::string(version()));
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file; flags override its values");

  std::vector<std::unique_ptr<OptionTable>> tables;
  auto sub = [&](const std::string& name, const std::string& help) {
    tables.push_back(std::make_unique<OptionTable>(app.add_subcommand(name, help)));
    add_common(*tables.back(), c);
    return tables.back().get();
  };

  sub("params", "effective parameters (JSON)");
  sub("partition", "region of every BZ point (CSV)");
  auto* ed = sub("ed", "exact diagonalization of the t-V model (JSON)");
  ed->add("n1", c.n1, "lattice extent along e1");
  ed->add("n2", c.n2, "lattice extent along e2");
  ed->add("particles", c.particles, "particle number (default half filling)");
  ed->add("mu", c.mu, "microscopic chemical potential");
  ed->flag("ph", c.ph, "also run the particle-hole check");
  ed->add("levels", c.levels, "levels compared by the particle-hole check");
  auto* disp = sub("dispersion", "boson dispersion ω±(p) on a grid (CSV)");
  disp->add("grid", c.grid, "points per axis");
  disp->add("gamma", c.gamma, "override γ (negative: from params)");
  disp->flag("gamma-from-params", c.gamma_from_params, "take γ from the microscopic parameters");
  disp->add("source", c.source, "closed-form | numeric");
  auto* fe = sub("free-energy", "boson free energy F(T) (JSON)");
  fe->add("boson-cells", c.boson_cells, "boson grid points per axis (default --cells)");
  fe->add("temperatures", c.temperatures, "comma-separated temperatures");
  fe->add("gamma", c.gamma, "override γ (negative: from params)");
  auto* gap = sub("gap", "mean-field CDW gap (CSV)");
  gap->add("grid", c.grid, "antinodal grid points per axis");
  gap->add("T", c.T, "temperature");
  gap->add("q-count", c.q_count, "scan this many Q values around π/2 (0: single Q from --nu)");
  gap->add("q-halfwidth", c.q_halfwidth, "half width of the Q scan");
  gap->add("damping", c.damping, "mixing fraction of the fixed-point update");
  gap->add("kernel-prefactor", c.kernel_prefactor, "convention constant between g3_eff and the kernel");
  gap->add("delta0", c.delta0, "initial gap (negative: t)");
  auto* ver = sub("verify", "Fock-space verification of the bosonization identities (JSON)");
  ver->add("check", c.check, "schwinger | theorem-a | kronig | hn");
  ver->add("modes", c.modes, "longitudinal modes per channel");
  ver->add("margin", c.margin, "safe margin W");
  ver->add("transverse", c.transverse, "transverse channels (L/ã)");
  ver->add("branch-r", c.branch_r, "kronig branch r");
  ver->add("branch-s", c.branch_s, "kronig branch s");
  ver->add("gamma", c.gamma, "override γ for hn (negative: from params)");
  ver->add("levels", c.levels, "levels compared by hn");
  ver->add("energy-cap", c.energy_cap, "kinetic energy cap of the basis (0: none)");
  ver->add("max-states", c.max_states, "safe states per commutator before stride sampling");

  try {
    // Config values become leading tokens of the subcommand, so explicit
    // flags (later tokens) win under TakeLast.
    std::vector<std::string> tokens(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::string cfg_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] == "--config" && i + 1 < tokens.size()) cfg_path = tokens[i + 1];
      if (tokens[i].rfind("--config=", 0) == 0) cfg_path = tokens[i].substr(9);
    }
    if (!cfg_path.empty()) {
      auto cfg = load_config(cfg_path);
      auto table_of = [&](const std::string& name) -> const OptionTable* {
        for (const auto& t : tables)
          if (t->app()->get_name() == name) return t.get();
        return nullptr;
      };
      std::size_t pos = 0;
      while (pos < tokens.size() && !table_of(tokens[pos])) ++pos;
      if (pos == tokens.size()) {
        if (!cfg.count("command")) throw UsageError("no subcommand given on the command line or in the config");
        // Leading subcommand: the remaining flags fall through to it.
        tokens.insert(tokens.begin(), cfg["command"]);
        pos = 0;
      }
      const OptionTable* table = table_of(tokens[pos]);
      if (!table) throw UsageError(fmt::format("unknown subcommand '{}' in config", tokens[pos]));
      std::vector<std::string> inject;
      for (const auto& [k, v] : cfg) {
        if (k == "command") continue;
        if (!table->has(k)) throw UsageError(fmt::format("config key '{}' is not an option of '{}'", k, tokens[pos]));
        if (table->is_flag(k)) {
          inject.push_back(fmt::format("--{}={}", k, v));
        } else {
          inject.push_back("--" + k);
          inject.push_back(v);
        }
      }
      tokens.insert(tokens.begin() + static_cast<long>(pos) + 1, inject.begin(), inject.end());
    }
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

  const OptionTable* table = nullptr;
  for (const auto& t : tables)
    if (t->app()->parsed()) table = t.get();
  Output out{table->app()->get_name(), table->resolved()};
  const std::string& name = out.command;
  try {
    if (name == "params") return cmd_params(c, out);
    if (name == "partition") return cmd_partition(c, out);
    if (name == "ed") return cmd_ed(c, out);
    if (name == "dispersion") return cmd_dispersion(c, out);
    if (name == "free-energy") return cmd_free_energy(c, out);
    if (name == "gap") return cmd_gap(c, out);
    if (name == "verify") return cmd_verify(c, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << table->app()->help();
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace lutt2d
