#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fock/config.hpp"

using namespace fock;
using namespace fock::cli;
using nlohmann::json;

namespace {

const char* kGaussianConfig = R"({
  "weight": {"family": "gaussian"},
  "dimension": 1,
  "fiber": 1,
  "truncation": 10,
  "seed": 42,
  "symbols": [
    {"name": "z", "terms": [{"index": [1], "matrix": [[[1.0, 0.0]]]}]}
  ],
  "grid": {"rmin": 0.1, "rmax": 4.0, "radii": 10, "directions": 8},
  "pairs": 6,
  "p_list": [6.0],
  "cutoffs": [1.0, 2.0, 4.0, 8.0],
  "decay_radii": [2.0, 4.0],
  "truncation_sweep": [4, 6, 8],
  "identity_degree": 7
})";

ExperimentConfig gaussian_config() {
  return parse_config_json(json::parse(kGaussianConfig));
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("round trip of the documented fields") {
    const ExperimentConfig c = gaussian_config();
    CHECK(c.weight.family == "gaussian");
    CHECK(c.dimension == 1);
    CHECK(c.truncation == 10);
    CHECK(c.symbols.size() == 1);
    CHECK(c.symbols[0].name == "z");
    CHECK(c.symbols[0].symbol.degree() == 1);
    CHECK(c.tolerance("mo_agreement") == 1e-6);
  }
  SUBCASE("field diagnostics carry the offending path") {
    json j = json::parse(kGaussianConfig);
    j["dimension"] = 7;
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("dimension"),
                         std::invalid_argument);
    json j2 = json::parse(kGaussianConfig);
    j2["unknown_knob"] = 1;
    CHECK_THROWS_WITH_AS(parse_config_json(j2), doctest::Contains("unknown_knob"),
                         std::invalid_argument);
    json j3 = json::parse(kGaussianConfig);
    j3["symbols"][0]["terms"][0]["matrix"] = json::array();
    CHECK_THROWS_WITH_AS(parse_config_json(j3), doctest::Contains("matrix"),
                         std::invalid_argument);
    json j4 = json::parse(kGaussianConfig);
    j4["tolerances"] = {{"mo_agreement", -1.0}};
    CHECK_THROWS_WITH_AS(parse_config_json(j4), doctest::Contains("positive"),
                         std::invalid_argument);
    json j5 = json::parse(kGaussianConfig);
    j5["weight"] = {{"family", "power"}, {"s", 1.5}};
    CHECK_THROWS_AS(parse_config_json(j5), std::invalid_argument);
  }
  SUBCASE("complex literals are [re, im] pairs") {
    json j = json::parse(kGaussianConfig);
    j["symbols"][0]["terms"][0]["matrix"][0][0] = 3.5;
    CHECK_THROWS_WITH_AS(parse_config_json(j), doctest::Contains("[re, im]"),
                         std::invalid_argument);
  }
}

TEST_CASE("equivalence run on the gaussian isometry scenario") {
  const ExperimentConfig c = gaussian_config();
  RunOptions opt;
  const Report rep = run_subcommand("equivalence", c, opt);
  REQUIRE(rep.pass());
  REQUIRE(rep.scenarios.size() == 2);  // symbol + band summary
  const json& rec = rep.scenarios[0].records;
  CHECK(rec["bloch"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rec["bmo"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rec["hankel_plus_t0"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reports are deterministic given config and seed") {
  const ExperimentConfig c = gaussian_config();
  auto scrubbed = [](const Report& r) {
    json j = r.to_json()["scenarios"];
    for (auto& sc : j) sc.erase("runtime_s");  // wall-clock is not content
    return j;
  };
  RunOptions opt;
  const Report a = run_subcommand("bmo", c, opt);
  const Report b = run_subcommand("bmo", c, opt);
  CHECK(scrubbed(a) == scrubbed(b));
  RunOptions two = opt;
  two.jobs = 2;
  const Report cpar = run_subcommand("bmo", c, two);
  CHECK(scrubbed(a) == scrubbed(cpar));
  CHECK(a.seed == 42);
}

TEST_CASE("larger truncation never decreases the reported operator norm") {
  ExperimentConfig c = gaussian_config();
  RunOptions opt;
  c.truncation = 8;
  const Report small = run_subcommand("hankel", c, opt);
  c.truncation = 12;
  const Report big = run_subcommand("hankel", c, opt);
  const double s_small =
      small.scenarios[0].records["operator_norm"].get<double>();
  const double s_big = big.scenarios[0].records["operator_norm"].get<double>();
  CHECK(s_big >= s_small - 1e-12);
}

TEST_CASE("report files: JSON report plus CSV tables") {
  namespace fs = std::filesystem;
  const ExperimentConfig c = gaussian_config();
  RunOptions opt;
  opt.out_dir = (fs::temp_directory_path() / "focklab_test_out").string();
  fs::remove_all(opt.out_dir);
  const Report rep = run_subcommand("hankel", c, opt);
  CHECK(fs::exists(fs::path(opt.out_dir) / "report.json"));
  CHECK(fs::exists(fs::path(opt.out_dir) / "spectra.csv"));
  std::ifstream in(fs::path(opt.out_dir) / "spectra.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "scenario,n,s_n");
  std::ifstream jin(fs::path(opt.out_dir) / "report.json");
  const json back = json::parse(jin);
  CHECK(back["seed"] == 42);
  CHECK(back["subcommand"] == "hankel");
  CHECK(back["pass"] == true);
  for (const auto& sc : back["scenarios"])
    for (const auto& chk : sc["checks"]) CHECK(chk.contains("tolerance"));
  fs::remove_all(opt.out_dir);
}

TEST_CASE("failed asserted checks surface in the exit status logic") {
  ExperimentConfig c = gaussian_config();
  // an impossible tolerance forces a clean failure rather than a crash
  c.tolerances["mo_agreement"] = 1e-300;
  RunOptions opt;
  const Report rep = run_subcommand("bmo", c, opt);
  CHECK(!rep.pass());
}

TEST_CASE("strict mode promotes informational checks") {
  ExperimentConfig c = gaussian_config();
  c.tolerances["stabilization"] = 1e-300;  // informational check will fail
  RunOptions opt;
  const Report rep = run_subcommand("hankel", c, opt);
  CHECK(rep.pass());  // informational only
  opt.strict = true;
  const Report srep = run_subcommand("hankel", c, opt);
  CHECK(!srep.pass());
}

TEST_CASE("subcommand catalogue is stable") {
  const auto& names = subcommand_names();
  CHECK(names.size() == 10);
  CHECK_THROWS_AS(run_subcommand("no-such-command", gaussian_config(), RunOptions{}),
                  std::invalid_argument);
}
