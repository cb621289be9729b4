#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "entrex/runner.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) {
  g_stop.store(true);
  std::signal(SIGINT, SIG_DFL);  // a second ^C kills immediately
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entrance/exit chain verification lab"};
  std::string config_path, out_dir, suite;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool list = false;
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--config", config_path, "TOML experiment file");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (overrides ENTREX_OUT_DIR and the config)");
  app.add_flag("--list", list, "print experiment kinds and suites");
  auto* suite_cmd = app.add_subcommand("suite", "run a built-in suite");
  suite_cmd->add_option("name", suite, "exact, mc-fast or mc-full")->required();
  suite_cmd->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    std::cout << "experiment kinds:\n";
    for (const auto& k : entrex::experiment_kinds()) std::cout << "  " << k << '\n';
    std::cout << "suites:\n";
    for (const auto& s : entrex::suite_names()) std::cout << "  " << s << '\n';
    return 0;
  }

  entrex::RunConfig cfg;
  try {
    if (*suite_cmd) {
      if (!config_path.empty()) throw entrex::ConfigError("--config", 0, "use either --config or suite, not both");
      cfg = entrex::builtin_suite(suite);
    } else if (!config_path.empty()) {
      cfg = entrex::load_config(config_path);
    } else {
      throw entrex::ConfigError("--config", 0, "nothing to run: pass --config <path> or suite <name>");
    }
    if (*seed_opt) {
      cfg.seed = seed;
      cfg.seed_set = true;
    }
    if (!cfg.seed_set) throw entrex::ConfigError("seed", 0, "field 'seed': no master seed in the config and no --seed");
  } catch (const entrex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (const char* env = std::getenv("ENTREX_OUT_DIR"); env && *env) cfg.out_dir = env;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads > 0) cfg.threads = threads;

  std::signal(SIGINT, on_sigint);
  entrex::RunSummary summary;
  try {
    summary = entrex::run_config(cfg, std::cerr, &g_stop);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  entrex::print_summary(std::cout, summary);
  std::cout << "report: " << cfg.out_dir << "/report.jsonl\n";
  return summary.all_pass() ? 0 : 1;
}
