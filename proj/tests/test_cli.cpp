#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "brmst/csv.hpp"
#include "brmst/simulation.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "brmst_cli_tests";

int run(const std::string& args) {
  fs::create_directories(kScratch);
  const std::string cmd = std::string(BRMST_CLI) + " " + args + " > " + (kScratch / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

fs::path scenario_csv(const brmst::ScenarioConfig& cfg, const std::string& name) {
  fs::create_directories(kScratch);
  const fs::path path = kScratch / name;
  brmst::write_csv(brmst::generate_scenario(cfg, 0), path.string());
  return path;
}

}  // namespace

TEST_CASE("rmst subcommand reproduces the closed forms") {
  const fs::path out = kScratch / "rmst.json";
  REQUIRE(run("rmst --family exponential --lambda " + std::to_string(std::exp(-4.5)) + " --tau 100 --output " +
              out.string()) == 0);
  CHECK(std::fabs(load(out)["rmst"].get<double>() - 60.37) < 0.01);

  REQUIRE(run("rmst --family weibull --lambda 1 --k 1 --tau 5 --output " + out.string()) == 0);
  const double weibull = load(out)["rmst"].get<double>();
  REQUIRE(run("rmst --family exponential --lambda 1 --tau 5 --output " + out.string()) == 0);
  CHECK(weibull == doctest::Approx(load(out)["rmst"].get<double>()).epsilon(1e-14));

  REQUIRE(run("rmst --family loglogistic --mu -10 --k 2 --effect frailty --v 1.5 --tau 100 --output " + out.string()) ==
          0);
  const json doc = load(out);
  CHECK(doc["rmst"].get<double>() == doctest::Approx(82.931190842001557).epsilon(1e-10));
  CHECK(doc["config"]["family"] == "loglogistic");
  CHECK(doc["config"]["tau"] == 100.0);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("rmst --family bogus --tau 5") == 2);
  CHECK(run("rmst --family exponential --lambda -1 --tau 5") == 2);
  CHECK(run("rmst --family exponential --lambda 1 --tau -5") == 2);
  CHECK(run("fit --input x.csv --family gamma") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("runtime failures exit with status 1 and write nothing") {
  const fs::path out = kScratch / "never.json";
  fs::remove(out);
  CHECK(run("fit --input " + (kScratch / "missing.csv").string() + " --output " + out.string()) == 1);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(fs::path(out.string() + ".tmp")));
}

TEST_CASE("fit honours the sampler flags and reports every section") {
  const fs::path csv = scenario_csv(brmst::scenario_config(brmst::Scenario::C, 64), "fit.csv");
  const fs::path out = kScratch / "fit.json";
  REQUIRE(run("fit --input " + csv.string() +
              " --covariate x2 --effect random --chains 2 --iter 2000 --burnin 1000 --seed 5 --threshold 0 --output " +
              out.string()) == 0);
  const json doc = load(out);
  CHECK(doc["command"] == "fit");
  CHECK(doc["config"]["sampler"]["chains"] == 2);
  CHECK(doc["config"]["sampler"]["iter"] == 2000);
  CHECK(doc["config"]["sampler"]["burnin"] == 1000);
  CHECK(doc["config"]["sampler"]["seed"] == 5);
  CHECK(doc["draws"]["chains"] == 2);
  CHECK(doc["draws"]["kept_per_chain"] == 1000);
  CHECK(doc["data"]["rows"] == 64);
  CHECK(doc["parameters"].size() == 3 + 4 + 1);
  for (const auto& p : doc["parameters"]) CHECK(p["lo"].get<double>() <= p["hi"].get<double>());
  const auto& diff = doc["rmst"]["difference"];
  CHECK(diff["ci"]["lo"].get<double>() <= diff["ci"]["hi"].get<double>());
  CHECK(diff["below_threshold"][0]["threshold"] == 0.0);
  CHECK(doc["forest"].size() == 5);
  CHECK(doc["histogram"]["edges"].size() == doc["histogram"]["counts"].size() + 1);

  // same seed, same document
  const fs::path again = kScratch / "fit_again.json";
  REQUIRE(run("fit --input " + csv.string() +
              " --covariate x2 --effect random --chains 2 --iter 2000 --burnin 1000 --seed 5 --threshold 0 --output " +
              again.string()) == 0);
  CHECK(load(again)["rmst"] == doc["rmst"]);
}

TEST_CASE("simulate exports and evaluates") {
  const fs::path csv = kScratch / "sim.csv";
  REQUIRE(run("simulate --scenario B --n 64 --replicate 2 --export-csv " + csv.string()) == 0);
  const auto data = brmst::ingest_csv(csv.string(), brmst::CsvSchema{"time", "event", "group", "cluster", {"x2"}, {}});
  CHECK(data == brmst::generate_scenario(brmst::scenario_config(brmst::Scenario::B, 64), 2));

  const fs::path out = kScratch / "sim.json";
  REQUIRE(run("simulate --scenario C --n 64 --replications 2 --iter 600 --burnin 300 --threads 1 --output " +
              out.string()) == 0);
  const json doc = load(out);
  CHECK(doc["records"].size() == 2);
  CHECK(doc["metrics"]["succeeded"] == 2);
  CHECK(doc["truth"]["difference"].get<double>() == doctest::Approx(-14.524).epsilon(1e-4));
  CHECK(run("simulate --scenario C --n 63") == 2);
}

TEST_CASE("waic prefers the generating Weibull family") {
  brmst::ScenarioConfig cfg = brmst::scenario_config(brmst::Scenario::C, 512);
  cfg.scenario = brmst::Scenario::Custom;
  cfg.family = brmst::Family::Weibull;
  cfg.shape = 1.7;
  cfg.beta(0) = -7.0;
  const fs::path csv = scenario_csv(cfg, "weibull.csv");
  const fs::path out = kScratch / "waic.json";
  REQUIRE(run("waic --input " + csv.string() + " --covariate x2 --family weibull --family exponential --iter 1500 "
              "--burnin 500 --output " + out.string()) == 0);
  const json doc = load(out);
  REQUIRE(doc["models"].size() == 2);
  CHECK(doc["models"][0]["family"] == "weibull");
  CHECK(doc["models"][0]["waic"].get<double>() < doc["models"][1]["waic"].get<double>());
}
