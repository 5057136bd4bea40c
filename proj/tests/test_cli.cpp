#include "cmcgraph/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cmc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("cmcgraph_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("help and bad flags") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--signature") != std::string::npos);
  r = run({"solve", "--bogus", "1"});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("kind=config") != std::string::npos);
  r = run({"solve", "--h", "1/0"});
  CHECK(r.code == cli::kConfigError);
  r = run({"solve", "--signature", "minkowski"});
  CHECK(r.code == cli::kConfigError);
  r = run({"--h", "1/32"});
  CHECK(r.code == cli::kConfigError);  // no command
}

TEST_CASE("config parsing") {
  const auto cfg = cli::parse_config_text(
      "command = verify\n[domain]\nshape = implicit\nfamily = star\nr0 = 1\namplitude = 0.3\nlobes = 5\n"
      "[problem]\nH = 2\nsignature = lorentz\nh = 1/32\n[continuation]\nt_step_init = 0.05\n");
  CHECK(cfg.command == "verify");
  CHECK(cfg.H == 2.0);
  CHECK(cfg.signature == Signature::Lorentzian);
  CHECK(cfg.h == 1.0 / 32);
  CHECK(cfg.continuation.t_step_init == 0.05);
  CHECK(cfg.domain.at("family") == "star");

  // Effective configuration round-trips.
  const std::string ini = cli::to_ini(cfg);
  CHECK(cli::to_ini(cli::parse_config_text(ini)) == ini);

  CHECK_THROWS_WITH_AS(cli::parse_config_text("[problem]\nHH = 1\n"), doctest::Contains("problem.HH"), cli::ConfigError);
  CHECK_THROWS_WITH_AS(cli::parse_config_text("[solver]\nx = 1\n"), doctest::Contains("solver"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config_text("[problem]\nH = abc\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config_text("[sweep]\njobs = 1.5\n"), cli::ConfigError);

  CHECK(cli::parse_domain_spec("star:1,0.3,5").at("lobes") == "5");
  CHECK(cli::parse_domain_spec("rectangle:0,0,2,1").at("shape") == "rectangle");
  CHECK_THROWS_AS(cli::parse_domain_spec("hexagon:1"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_domain_spec("disk:1,2"), cli::ConfigError);
  CHECK_THROWS_AS(cli::build_domain({{"shape", "disk"}, {"center", "0,0"}, {"radius", "1"}, {"width", "2"}}),
                  cli::ConfigError);
  CHECK(cli::build_boundary_data("linear:1,2,3")({1.0, 1.0}) == 6.0);
  CHECK_THROWS_AS(cli::build_boundary_data("quadratic"), cli::ConfigError);
}

TEST_CASE("unknown config key exits 3 and names the key") {
  TempDir t;
  write(t.path / "bad.ini", "command = solve\n[problem]\nH = 0.5\ncurvature = 1\n");
  const auto r = run({"--config", (t.path / "bad.ini").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("problem.curvature") != std::string::npos);
  CHECK_FALSE(fs::exists(t.path / "out"));
}

TEST_CASE("solve writes artifacts with metadata") {
  TempDir t;
  const fs::path out = t.path / "a";
  const auto r = run({"solve", "--H", "0.5", "--h", "1/16", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("status=converged") != std::string::npos);
  for (const char* f : {"field.csv", "outcome.json", "diagnostics.jsonl", "effective_config.ini"}) {
    CHECK(fs::exists(out / f));
    const fs::path side = out / (std::string(f) + ".meta.json");
    REQUIRE(fs::exists(side));
    const json m = json::parse(slurp(side));
    CHECK(m.at("tool_version") == "0.1.0");
    CHECK(m.at("config_hash").get<std::string>().size() == 16);
    CHECK(m.at("grid").at("h") == 1.0 / 16);
  }
  CHECK(slurp(out / "field.csv").rfind("x,y,u\n", 0) == 0);
  const json o = json::parse(slurp(out / "outcome.json"));
  CHECK(o.at("status") == "converged");
  CHECK(o.at("predicates").at("t5_ok") == true);
  for (const auto& entry : fs::directory_iterator(out)) CHECK(entry.path().extension() != ".tmp");

  // Re-running from the effective configuration reproduces the field exactly.
  const fs::path again = t.path / "b";
  const auto r2 = run({"--config", (out / "effective_config.ini").string(), "--out", again.string()});
  REQUIRE(r2.code == 0);
  CHECK(slurp(again / "field.csv") == slurp(out / "field.csv"));
}

TEST_CASE("predicted nonexistence exits 2") {
  TempDir t;
  const auto r = run({"solve", "--H", "1.2", "--h", "1/16", "--out", t.path.string()});
  CHECK(r.code == cli::kPredictedFailure);
  const json o = json::parse(slurp(t.path / "outcome.json"));
  CHECK(o.at("status") != "converged");
  CHECK(o.at("predicted_nonexistence") == true);
}

TEST_CASE("verify writes a passing report") {
  TempDir t;
  const auto r = run({"verify", "--H", "0.5", "--signature", "lorentz", "--h", "1/16", "--out", t.path.string()});
  REQUIRE(r.code == 0);
  const json rep = json::parse(slurp(t.path / "report.json"));
  CHECK(rep.at("all_pass") == true);
  CHECK(rep.at("valid") == true);
  for (const auto& c : rep.at("checks"))
    for (const char* k : {"name", "bound", "measured", "slack", "tol", "pass"}) CHECK(c.contains(k));
}

TEST_CASE("predicates on the star domain") {
  TempDir t;
  const auto r = run({"predicates", "--domain", "star:1,0.3,5", "--H", "3", "--signature", "lorentz", "--out",
                      t.path.string()});
  REQUIRE(r.code == 0);
  const json p = json::parse(slurp(t.path / "predicates.json"));
  CHECK(p.at("lorentz_smooth_ok") == true);
  CHECK(p.at("lorentz_convex_ok") == false);
  CHECK(p.at("predicts_existence") == true);
}

TEST_CASE("catalog") {
  TempDir t;
  auto r = run({"catalog", "--surface", "profile", "--H", "1", "--c", "-1", "--out", t.path.string()});
  REQUIRE(r.code == 0);
  const json s = json::parse(slurp(t.path / "catalog.json"));
  CHECK(s.at("r0") == doctest::Approx(1.0));
  CHECK(slurp(t.path / "catalog.csv").rfind("r,w,dw\n", 0) == 0);
  r = run({"catalog", "--surface", "euclid-cap", "--H", "0.5", "--out", t.path.string()});
  CHECK(r.code == 0);
  r = run({"catalog", "--surface", "torus", "--H", "0.5", "--out", t.path.string()});
  CHECK(r.code == cli::kConfigError);
}

TEST_CASE("sweep") {
  TempDir t;
  const auto r = run({"sweep", "--H-values", "0.25,1.2", "--h", "1/16", "--jobs", "2", "--out", t.path.string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(t.path / "sweep.csv");
  CHECK(csv.rfind("H,signature,status,sup_u,max_du,diam_bound_slack,strip_bound_slack\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("0.25,euclid,converged") != std::string::npos);
  CHECK(r.out.find("rows=2 all_match=true") != std::string::npos);
}
