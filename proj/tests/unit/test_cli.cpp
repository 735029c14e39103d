#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lutt2d/cli.hpp"
#include "lutt2d/model_core.hpp"

using namespace lutt2d;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("lutt2d_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lutt2d");
  return run(args);
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::stringstream s(csv);
  std::string line;
  bool header = true;
  while (std::getline(s, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::vector<double> split_numbers(const std::string& row, int count) {
  std::vector<double> out;
  std::stringstream s(row);
  std::string cell;
  while (static_cast<int>(out.size()) < count && std::getline(s, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

int process_exit(const std::string& args) {
  const char* bin = std::getenv("LUTT2D_CLI");
  REQUIRE(bin != nullptr);
  const int status = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("exit codes of the executable") {
  CHECK(process_exit("--version") == 0);
  CHECK(process_exit("--help") == 0);
  CHECK(process_exit("params") == 0);
  CHECK(process_exit("") == 2);
  CHECK(process_exit("bogus") == 2);
  CHECK(process_exit("params --t abc") == 2);
  CHECK(process_exit("params --cells 4") == 1);
  CHECK(process_exit("verify --check nothing") == 2);
  CHECK(process_exit("dispersion --gamma 1.5") == 1);
  CHECK(process_exit("dispersion --gamma 0.2 --gamma-from-params") == 2);
  CHECK(process_exit("params --config /nonexistent/file") == 2);
}

TEST_CASE("params JSON carries the effective parameters and the resolved config") {
  const fs::path out = scratch() / "params.json";
  REQUIRE(cli({"params", "--t", "1", "--V", "2", "--a", "1", "--nu", "0.55", "--output", out.string()}) == 0);
  const Json j = Json::parse(slurp(out));
  CHECK(j["version"] == version());
  CHECK(j["command"] == "params");
  CHECK(j["config"]["nu"] == "0.55");
  const Json& u = j["result"]["unrounded"];
  const EffectiveParams e = effective_params_at(1, 2, 1, 0.55 * kPi);
  CHECK(u["v_F"].get<double>() == e.v_F);
  CHECK(u["mu_a"].get<double>() == doctest::Approx(0.699059).epsilon(1e-5));
  CHECK(u["g1"].get<double>() == doctest::Approx(3.902113).epsilon(1e-6));
  CHECK(u["stability"] == "stable");
  const MicroParams mp(1, 2, 1, 9, 0.55);
  CHECK(j["result"]["Q"].get<double>() == mp.Q());
  CHECK(j["result"]["nu_rounding"].get<double>() == doctest::Approx(mp.nu_rounding()));
}

TEST_CASE("dispersion CSV: 64² rows, all frequencies non-negative") {
  const fs::path out = scratch() / "disp.csv";
  REQUIRE(cli({"dispersion", "--gamma-from-params", "--grid", "64", "--output", out.string()}) == 0);
  const auto rows = data_rows(slurp(out));
  CHECK(rows.size() == 64 * 64);
  for (const auto& r : rows) {
    const auto v = split_numbers(r, 4);
    CHECK(v[2] >= 0.0);
    CHECK(v[3] >= 0.0);
    CHECK(v[2] >= v[3]);
  }
  CHECK(slurp(out).find("# kappa = 2") != std::string::npos);
}

TEST_CASE("partition CSV covers the zone exactly") {
  const fs::path out = scratch() / "part.csv";
  REQUIRE(cli({"partition", "--cells", "3", "--nu", "0.5", "--output", out.string()}) == 0);
  const std::string text = slurp(out);
  CHECK(data_rows(text).size() == 72);
  CHECK(text.find("# exact_cover = true") != std::string::npos);
  CHECK(text.find("k1,k2,r,s,kp_plus,kp_minus") != std::string::npos);
}

TEST_CASE("verify schwinger report") {
  const fs::path out = scratch() / "verify.json";
  REQUIRE(cli({"verify", "--check", "schwinger", "--modes", "10", "--margin", "3", "--output", out.string()}) == 0);
  const Json r = Json::parse(slurp(out))["result"];
  CHECK(r["check"] == "schwinger");
  CHECK(r["pass"] == true);
  CHECK(r["max_residual"].get<double>() <= 1e-12);
  CHECK(r.contains("dims"));
  CHECK(r.contains("levels_compared"));
}

TEST_CASE("gap, free-energy and ed outputs") {
  const fs::path g = scratch() / "gap.csv";
  REQUIRE(cli({"gap", "--V", "4", "--nu", "0.5", "--cells", "9", "--grid", "32", "--output", g.string()}) == 0);
  const auto rows = data_rows(slurp(g));
  REQUIRE(rows.size() == 1);
  CHECK(split_numbers(rows[0], 4)[3] > 0.0);
  CHECK(slurp(g).find("Q,V,T,Delta,filling,iterations,residual") != std::string::npos);

  const fs::path f = scratch() / "fe.json";
  REQUIRE(cli({"free-energy", "--V", "0", "--temperatures", "0,0.5,1", "--output", f.string()}) == 0);
  const Json fe = Json::parse(slurp(f))["result"];
  CHECK(fe["E_n"].get<double>() == 0.0);
  CHECK(fe["table"].size() == 3);

  const fs::path e = scratch() / "ed.json";
  REQUIRE(cli({"ed", "--n1", "2", "--n2", "2", "--particles", "1", "--V", "0", "--output", e.string()}) == 0);
  const Json ed = Json::parse(slurp(e))["result"];
  CHECK(ed["energy"].get<double>() == doctest::Approx(-4.0).epsilon(1e-12));
  for (const char* key : {"lattice", "params", "sector", "energy", "cdw_order", "residual"}) CHECK(ed.contains(key));
}

TEST_CASE("determinism and config round trip") {
  for (std::vector<std::string> args : {std::vector<std::string>{"gap", "--V", "4", "--q-count", "3", "--grid", "16"},
                                        std::vector<std::string>{"params", "--V", "3", "--nu", "0.6"},
                                        std::vector<std::string>{"free-energy", "--temperatures", "0.1,1"}}) {
    const fs::path a = scratch() / ("a_" + args[0]);
    const fs::path b = scratch() / ("b_" + args[0]);
    const fs::path c = scratch() / ("c_" + args[0]);
    auto with_out = [&](std::vector<std::string> v, const fs::path& p) {
      v.push_back("--output");
      v.push_back(p.string());
      return v;
    };
    REQUIRE(cli(with_out(args, a)) == 0);
    REQUIRE(cli(with_out(args, b)) == 0);
    CHECK(slurp(a) == slurp(b));
    // The emitted file is itself a config; no subcommand is needed.
    REQUIRE(cli({"--config", a.string(), "--output", c.string()}) == 0);
    CHECK(slurp(a) == slurp(c));
  }
}

TEST_CASE("flat config files; flags override; foreign keys rejected") {
  const fs::path cfg = scratch() / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# comment\ncommand = params\nV = 3\nnu = 0.6\n";
  }
  const auto m = load_config(cfg.string());
  CHECK(m.at("V") == "3");
  CHECK(m.at("command") == "params");
  const fs::path out = scratch() / "cfg.json";
  REQUIRE(cli({"--config", cfg.string(), "--V", "5", "--output", out.string()}) == 0);
  const Json j = Json::parse(slurp(out));
  CHECK(j["config"]["V"] == "5");
  CHECK(j["config"]["nu"] == "0.6");
  const fs::path bad = scratch() / "bad.cfg";
  {
    std::ofstream f(bad);
    f << "grid = 4\n";
  }
  CHECK(cli({"params", "--config", bad.string()}) == 2);
}
