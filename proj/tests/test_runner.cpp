#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entrex/runner.hpp"

using namespace entrex;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return std::string(e.what()) + " |field=" + e.field() + " |line=" + std::to_string(e.line());
  }
  return "";
}

}  // namespace

TEST_CASE("defaults fill unspecified sizes and tolerances") {
  const auto cfg = parse_config(R"(
seed = 3
[[experiment]]
kind = "lln_overshoots"
law = { kind = "gaussian", sigma = 2.0 }
)");
  CHECK(cfg.seed == 3);
  CHECK(cfg.seed_set);
  REQUIRE(cfg.experiments.size() == 1);
  const auto& e = cfg.experiments[0];
  CHECK(e.name == "lln_overshoots");
  CHECK(e.size("n_crossings") == 10000);
  CHECK(e.tolerance("tolerance") == 0.02);
  CHECK(e.starts == std::vector<double>{0.0});
  CHECK(e.law->sigma2() == 4.0);
}

TEST_CASE("lattice laws accept rationals, integers and decimals") {
  const auto cfg = parse_config(R"(
[[experiment]]
kind = "kac_mc"
law = { kind = "lattice", entries = [[-1, "2/3"], [2, 0.3333333333333333333]] }
)");
  CHECK_FALSE(cfg.seed_set);
  const auto& e = cfg.experiments[0];
  CHECK(e.window_lo == -3.0);
  CHECK(e.window_hi == 3.0);
}

TEST_CASE("schema errors name the field and line") {
  CHECK(config_error("[[experiment]]\nkind = \"stationarity\"\n").find("field=law") != std::string::npos);
  const auto bad_p = config_error(
      "[[experiment]]\nkind = \"stationarity\"\nname = \"x\"\n\nlaw = { kind = \"lattice\", entries = [[-1, "
      "\"2/3\"], [2, \"1/2\"]] }\n");
  CHECK(bad_p.find("line=5") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"nope\"\n").find("field=kind") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"finite_lab\"\nbogus = 1\n").find("field=bogus") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"finite_lab\"\nn_chains = -1\n").find("field=n_chains") !=
        std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"finite_lab\"\n[[experiment]]\nkind = \"finite_lab\"\n")
            .find("field=name") != std::string::npos);
  CHECK(config_error("seed = 1\n").find("field=experiment") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"kac_mc\"\nlaw = { kind = \"gaussian\", sigma = 1.0 }\n")
            .find("lattice") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"lln_overshoots\"\nlaw = { kind = \"lattice\", entries = [[-1, "
                     "\"1/3\"], [1, \"2/3\"]] }\n")
            .find("E X_1 = 0") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"hopf_ratio\"\nlaw = { kind = \"gaussian\", sigma = 1.0 }\n")
            .find("field=law") != std::string::npos);
  CHECK(config_error("[[experiment]]\nkind = \"lln_overshoots\"\nlaw = { kind = \"lattice\", entries = [[-1, "
                     "\"1/2\"], [1, \"1/2\"]] }\nstarts = [0.5]\n")
            .find("field=starts") != std::string::npos);
  CHECK(config_error("not toml = = 1").find("line=1") != std::string::npos);
}

TEST_CASE("experiment seeds depend on name only") {
  CHECK(experiment_seed(1, "a") == experiment_seed(1, "a"));
  CHECK(experiment_seed(1, "a") != experiment_seed(1, "b"));
  CHECK(experiment_seed(1, "a") != experiment_seed(2, "a"));
  const auto one = parse_config(
      "seed = 9\n[[experiment]]\nkind = \"finite_lab\"\nname = \"p\"\nn_chains = 2\n"
      "[[experiment]]\nkind = \"finite_lab\"\nname = \"q\"\nn_chains = 2\n");
  const auto two = parse_config(
      "seed = 9\n[[experiment]]\nkind = \"finite_lab\"\nname = \"q\"\nn_chains = 2\n"
      "[[experiment]]\nkind = \"finite_lab\"\nname = \"p\"\nn_chains = 2\n");
  const auto a = run_experiment(one.experiments[0], 9, 1, "", "");
  const auto b = run_experiment(two.experiments[1], 9, 1, "", "");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json() == b[i].to_json());
  CHECK(config_hash(one) != config_hash(two));
}

TEST_CASE("built-in suites parse") {
  for (const auto& s : suite_names()) {
    const auto cfg = builtin_suite(s);
    CHECK(cfg.seed_set);
    CHECK_FALSE(cfg.experiments.empty());
  }
  CHECK_THROWS_AS(builtin_suite("nope"), ConfigError);
  CHECK(experiment_kinds().size() == 9);
}

TEST_CASE("run_config writes a report per record and a summary") {
  auto cfg = builtin_suite("exact");
  const auto dir = std::filesystem::temp_directory_path() / "entrex_test_runner";
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  std::ostringstream log;
  const auto s = run_config(cfg, log);
  CHECK(s.all_pass());
  std::ifstream in(dir / "report.jsonl");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) {
    ++lines;
    const auto j = nlohmann::json::parse(l);
    CHECK(j.contains("config_hash"));
    CHECK(j["master_seed"] == cfg.seed);
  }
  CHECK(lines == s.reports.size());
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("a stop request before the start runs nothing") {
  auto cfg = builtin_suite("exact");
  const auto dir = std::filesystem::temp_directory_path() / "entrex_test_runner_stop";
  cfg.out_dir = dir.string();
  std::atomic<bool> stop{true};
  std::ostringstream log;
  const auto s = run_config(cfg, log, &stop);
  CHECK(s.interrupted);
  CHECK(s.reports.empty());
  CHECK_FALSE(s.all_pass());
  std::filesystem::remove_all(dir);
}
