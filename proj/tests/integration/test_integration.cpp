#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "lutt2d/antinodal_mf.hpp"
#include "lutt2d/cli.hpp"
#include "lutt2d/fock_verify.hpp"
#include "lutt2d/model_core.hpp"
#include "lutt2d/nodal_boson.hpp"
#include "lutt2d/tv_ed.hpp"
#include "lutt2d/zone_partition.hpp"

using namespace lutt2d;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lutt2d_integration_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST_CASE("lattice parameters drive the partition and the filling fractions consistently") {
  for (int cells : {3, 5, 7}) {
    const MicroParams mp(1.0, 2.0, 1.0, cells, 0.55);
    const ZonePartition zp(mp);
    const auto sizes = RegionMap(zp).region_sizes();
    long total = 0;
    for (long n : sizes) total += n;
    CHECK(total == mp.sites());
    CHECK(zp.grid().size() == mp.sites());
    // Reference filling Q/π equals the rounded ν of the lattice.
    double nu = 0;
    for (double f : filling_fractions(mp.Q())) nu += f;
    CHECK(nu == doctest::Approx(mp.nu()).epsilon(1e-14));
    // The nodal Fermi points of the band model sit on the zone grid.
    for (int i = 0; i < kRegionCount; ++i) {
      const RegionIndex idx = all_regions()[i];
      const Momentum q = q_point(idx, mp.Q(), mp.a());
      const GridPoint g = q_point_grid(idx, mp.q_steps(), cells);
      const Momentum back = zp.grid().to_momentum(g, mp.a());
      CHECK(back.k_plus == doctest::Approx(q.k_plus).epsilon(1e-12));
      CHECK(back.k_minus == doctest::Approx(q.k_minus).epsilon(1e-12));
    }
  }
}

TEST_CASE("linearized nodal band matches the lattice band near the Fermi points") {
  const MicroParams mp(1.0, 2.0, 1.0, 9, 0.55);
  const EffectiveParams e = derive_effective_params(mp);
  for (const RegionIndex idx : {RegionIndex{1, 1}, RegionIndex{-1, -1}}) {
    const Momentum q = q_point(idx, e.Q, e.a);
    const double h = 1e-4;
    Momentum k = q;
    (idx.s > 0 ? k.k_plus : k.k_minus) += h;
    const double exact = band_energy(k, e.t, e.a);
    const double linear = linearized_band(idx, {idx.s > 0 ? h : 0.0, idx.s > 0 ? 0.0 : h}, e);
    CHECK(std::abs(exact - linear) < 10 * h * h);
  }
}

TEST_CASE("Bogoliubov E_n from nodal-boson agrees with the fermionic Hn ground state") {
  const EffectiveParams eff = effective_params_at(1.0, 0.4 * kPi, 1.0, kPi / 2);
  TruncationSpec s;
  s.longitudinal_modes = 6;
  s.transverse = 3;
  s.margin = 6;
  const TruncatedChiralSpace sp(s);
  SpectralOptions o;
  o.levels = 2;
  o.tolerance = 1e-8;
  o.energy_cap = 3;
  const VerifyReport rep = hn_equivalence_check(eff, sp, o);
  REQUIRE(rep.pass);
  const double unit = eff.v_F * 2 * kPi / (3 * eff.a_tilde());
  const double En = ground_constant(eff, {3, eff.a}) / unit;
  CHECK(rep.levels_lhs[0] >= En - 1e-12);
  CHECK(rep.levels_lhs[0] - En < 0.05 * std::abs(En));
}

TEST_CASE("gap grows with the boson-integrated coupling and vanishes without it") {
  double prev = -1;
  for (double V : {0.0, 2.0, 4.0, 6.0}) {
    const EffectiveParams e = effective_params_at(1.0, V, 1.0, kPi / 2);
    const auto [g3, g4] = effective_antinodal_couplings(e);
    const GapSolution s = solve_gap(e, {48, 1.0});
    CHECK(s.g3_eff == g3);
    CHECK(s.Delta >= prev);
    if (V == 0.0) CHECK(s.Delta == 0.0);
    prev = s.Delta;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("ED chemical potential from the effective model leaves the sector spectrum rigid") {
  // μ only shifts fixed-N energies by -μN; the effective μ enters the ED as such.
  const EffectiveParams e = effective_params_at(1.0, 2.0, 1.0, kPi / 2);
  CHECK(e.mu == doctest::Approx(2.0).epsilon(1e-14));
  const double e0 = ground_state(build_htv({4, 2}, {1.0, 2.0, 0.0}, {.sector = 4})).energy;
  const double e1 = ground_state(build_htv({4, 2}, {1.0, 2.0, e.mu}, {.sector = 4})).energy;
  CHECK(e1 == doctest::Approx(e0 - 4 * e.mu).epsilon(1e-10));
}

TEST_CASE("CLI params output reproduces the library effective parameters") {
  const fs::path out = scratch("params.json");
  REQUIRE(run({"lutt2d", "params", "--V", "3", "--nu", "0.6", "--cells", "11", "--output", out.string()}) == 0);
  const auto j = nlohmann::json::parse(slurp(out))["result"];
  const EffectiveParams e = derive_effective_params(MicroParams(1.0, 3.0, 1.0, 11, 0.6));
  CHECK(j["Q"].get<double>() == e.Q);
  CHECK(j["v_F"].get<double>() == e.v_F);
  CHECK(j["g1"].get<double>() == e.g1);
  CHECK(j["mu_a"].get<double>() == e.mu_a);
  CHECK(j["gamma"].get<double>() == e.gamma);
  CHECK(j["g3_eff"].get<double>() == effective_antinodal_couplings(e).first);
}

TEST_CASE("CLI free-energy output equals the library thermodynamics") {
  const fs::path out = scratch("fe.json");
  REQUIRE(run({"lutt2d", "free-energy", "--V", "2", "--nu", "0.5", "--cells", "9", "--temperatures", "0,0.5",
               "--output", out.string()}) == 0);
  const auto j = nlohmann::json::parse(slurp(out))["result"];
  const EffectiveParams e = derive_effective_params(MicroParams(1.0, 2.0, 1.0, 9, 0.5));
  const ThermoResult r = free_energy(e, {9, 1.0}, {0.0, 0.5});
  CHECK(j["E_n"].get<double>() == r.E_n);
  CHECK(j["table"].size() == 2);
}
