#include "entrex/runner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include "toml.hpp"

#include "entrex/finite_chain.hpp"
#include "entrex/parallel.hpp"
#include "entrex/rng.hpp"

namespace entrex {

ConfigError::ConfigError(std::string field, std::size_t line, const std::string& msg)
    : std::runtime_error(msg), field_(std::move(field)), line_(line) {}

namespace {

struct KindSchema {
  std::string kind;
  bool needs_law;
  std::map<std::string, std::int64_t> sizes;      // defaults
  std::map<std::string, double> tolerances;       // defaults
  std::set<std::string> extra;                    // other accepted keys
};

const std::vector<KindSchema>& schemas() {
  static const std::vector<KindSchema> s = {
      {"finite_lab", false, {{"n_chains", 100}, {"n_states", 6}}, {}, {"chain", "chain_file"}},
      {"cross_oracle", false, {{"n_chains", 10}, {"n_states", 5}, {"samples_per_row", 100000}},
       {{"tolerance", 0.01}}, {}},
      {"stationarity", true, {{"n_samples", 100000}, {"horizon", 16000000}}, {}, {}},
      {"alternation", true, {{"n_samples", 100000}, {"horizon", 10000000}}, {}, {}},
      {"lln_overshoots", true, {{"n_crossings", 10000}, {"max_steps", 1000000000000000000}},
       {{"tolerance", 0.02}}, {"starts"}},
      {"clt_level_crossings", true, {{"n_steps", 10000}, {"n_replicas", 10000}},
       {{"tolerance", 0.05}, {"mean_tolerance", 0.02}}, {"starts", "csv"}},
      {"expected_crossings", true, {{"n_excursions", 1000000}, {"horizon", 10000000}},
       {{"tolerance", 0.05}}, {"levels"}},
      {"kac_mc", true, {{"n_excursions", 1000000}, {"horizon", 10000000}}, {{"tolerance", 0.05}},
       {"window"}},
      {"hopf_ratio", true, {{"n_entrances", 1000000}, {"replicas", 100}, {"horizon", 10000000}},
       {{"tolerance", 0.10}}, {"B1", "B2", "start"}},
  };
  return s;
}

std::size_t line_of(const toml::node& n) { return n.source().begin.line; }

[[noreturn]] void fail(const std::string& field, const toml::node& at, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line_of(at) << ", field '" << field << "': " << msg;
  throw ConfigError(field, line_of(at), os.str());
}

Rational rational_of(const toml::node& n, const std::string& field) {
  try {
    if (auto v = n.value_exact<std::int64_t>()) return Rational(*v);
    if (auto v = n.value_exact<double>()) return rational_from_double(*v);
    if (auto v = n.value_exact<std::string>()) return parse_rational(*v);
  } catch (const std::invalid_argument& e) {
    fail(field, n, e.what());
  }
  fail(field, n, "expected a number or a rational string");
}

double double_of(const toml::node& n, const std::string& field) { return to_double(rational_of(n, field)); }

std::vector<Rational> point_of(const toml::node& n, const std::string& field) {
  if (const auto* arr = n.as_array()) {
    std::vector<Rational> p;
    for (const auto& c : *arr) p.push_back(rational_of(c, field));
    if (p.empty()) fail(field, n, "empty point");
    return p;
  }
  return {rational_of(n, field)};
}

std::vector<double> doubles_of(const toml::node& n, const std::string& field) {
  std::vector<double> out;
  for (const auto& r : point_of(n, field)) out.push_back(to_double(r));
  return out;
}

std::vector<Point> points_of(const toml::node& n, const std::string& field) {
  const auto* arr = n.as_array();
  if (!arr || arr->empty()) fail(field, n, "expected a nonempty array of points");
  std::vector<Point> out;
  for (const auto& c : *arr) out.push_back(doubles_of(c, field));
  return out;
}

IncrementLaw law_of(const toml::node& n) {
  const auto* t = n.as_table();
  if (!t) fail("law", n, "expected an inline table");
  const auto* kind_node = t->get("kind");
  if (!kind_node) fail("law.kind", n, "missing required field 'law.kind'");
  const auto kind = kind_node->value<std::string>();
  if (!kind) fail("law.kind", *kind_node, "expected a string");
  auto need = [&](const char* key) -> const toml::node& {
    const auto* v = t->get(key);
    if (!v) fail(std::string("law.") + key, n, std::string("missing required field 'law.") + key + "'");
    return *v;
  };
  try {
    if (*kind == "lattice") {
      const auto& entries = need("entries");
      const auto* arr = entries.as_array();
      if (!arr || arr->empty()) fail("law.entries", entries, "expected a nonempty array of [point, probability]");
      std::vector<LatticeEntry> out;
      for (const auto& e : *arr) {
        const auto* pair = e.as_array();
        if (!pair || pair->size() != 2) fail("law.entries", e, "each entry must be [point, probability]");
        out.push_back({point_of(*pair->get(0), "law.entries"), rational_of(*pair->get(1), "law.entries")});
      }
      return IncrementLaw::lattice(std::move(out));
    }
    if (*kind == "gaussian") return IncrementLaw::gaussian(double_of(need("sigma"), "law.sigma"));
    if (*kind == "laplace") return IncrementLaw::laplace(double_of(need("scale"), "law.scale"));
    if (*kind == "uniform")
      return IncrementLaw::uniform(double_of(need("a"), "law.a"), double_of(need("b"), "law.b"));
  } catch (const LawError& e) {
    fail("law", n, e.what());
  }
  fail("law.kind", *kind_node, "unknown law kind '" + *kind + "' (lattice, gaussian, laplace, uniform)");
}

void check_law_fits(const ExperimentConfig& e, const toml::node& at) {
  const auto& law = *e.law;
  const bool lattice_only = e.kind == "expected_crossings" || e.kind == "kac_mc" || e.kind == "hopf_ratio";
  if (lattice_only && !law.is_lattice()) fail("law", at, e.kind + " requires a lattice law");
  const int want = e.kind == "hopf_ratio" ? 2 : 1;
  if (law.dim() != want) fail("law", at, e.kind + " requires d = " + std::to_string(want));
  if (want == 1 && !has_zero_mean_finite_variance(law))
    fail("law", at, e.kind + " requires E X_1 = 0 and finite positive variance");
}

ExperimentConfig experiment_of(const toml::table& t, const toml::node& at, const std::filesystem::path& base) {
  ExperimentConfig e;
  const auto* kind_node = t.get("kind");
  if (!kind_node) fail("kind", at, "missing required field 'kind'");
  const auto kind = kind_node->value<std::string>();
  const auto it = std::find_if(schemas().begin(), schemas().end(),
                               [&](const KindSchema& s) { return kind && s.kind == *kind; });
  if (it == schemas().end()) fail("kind", *kind_node, "unknown experiment kind (see --list)");
  const KindSchema& schema = *it;
  e.kind = schema.kind;
  e.name = schema.kind;
  e.sizes = schema.sizes;
  e.tolerances = schema.tolerances;

  for (const auto& [key_view, node] : t) {
    const std::string key(key_view.str());
    if (key == "kind") continue;
    if (key == "name") {
      const auto v = node.value<std::string>();
      if (!v || v->empty()) fail(key, node, "expected a nonempty string");
      e.name = *v;
    } else if (key == "law") {
      if (!schema.needs_law) fail(key, node, e.kind + " takes no law");
      e.law = law_of(node);
    } else if (schema.sizes.count(key)) {
      const auto v = node.value_exact<std::int64_t>();
      if (!v || *v <= 0) fail(key, node, "expected a positive integer");
      e.sizes[key] = *v;
    } else if (schema.tolerances.count(key)) {
      const double v = double_of(node, key);
      if (!(v >= 0.0)) fail(key, node, "expected a nonnegative number");
      e.tolerances[key] = v;
    } else if (schema.extra.count(key)) {
      if (key == "starts") {
        e.starts = doubles_of(node, key);
      } else if (key == "levels") {
        e.levels = doubles_of(node, key);
      } else if (key == "window") {
        const auto w = doubles_of(node, key);
        if (w.size() != 2 || w[0] > w[1]) fail(key, node, "expected [lo, hi] with lo <= hi");
        e.window_lo = w[0];
        e.window_hi = w[1];
      } else if (key == "B1") {
        e.B1 = points_of(node, key);
      } else if (key == "B2") {
        e.B2 = points_of(node, key);
      } else if (key == "start") {
        e.start = doubles_of(node, key);
      } else if (key == "csv") {
        const auto v = node.value_exact<bool>();
        if (!v) fail(key, node, "expected true or false");
        e.write_csv = *v;
      } else if (key == "chain") {
        const auto v = node.value<std::string>();
        if (!v) fail(key, node, "expected a string");
        e.chain_text = *v;
      } else if (key == "chain_file") {
        const auto v = node.value<std::string>();
        if (!v) fail(key, node, "expected a path string");
        std::ifstream in(base / *v);
        if (!in) fail(key, node, "cannot read '" + (base / *v).string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        e.chain_text = ss.str();
      }
    } else {
      fail(key, node, "unknown field for kind '" + e.kind + "'");
    }
  }

  if (schema.needs_law) {
    if (!e.law) fail("law", at, "missing required field 'law'");
    check_law_fits(e, at);
  }
  if (e.kind == "lln_overshoots" || e.kind == "clt_level_crossings") {
    if (e.starts.empty()) e.starts = {0.0};
    for (double s : e.starts)
      if (!e.law->space().contains(std::span<const double>(&s, 1)))
        fail("starts", at, "start is not on the lattice of the law");
  }
  if (e.kind == "expected_crossings" && e.levels.empty()) e.levels = {0.0, 1.0, 2.0, 5.0};
  if (e.kind == "kac_mc" && !t.get("window")) {
    e.window_lo = -3.0;
    e.window_hi = 3.0;
  }
  if (e.kind == "hopf_ratio") {
    if (e.B1.empty()) e.B1 = {{0.0, 0.0}};
    if (e.B2.empty()) e.B2 = {{1.0, 0.0}};
    if (e.start.empty()) e.start = {0.0, 0.0};
    if (e.size("replicas") > e.size("n_entrances")) fail("replicas", at, "replicas must not exceed n_entrances");
  }
  if (e.kind == "finite_lab" && !e.chain_text.empty()) {
    try {
      (void)parse_chain_text(e.chain_text);
    } catch (const std::exception& ex) {
      fail(t.get("chain") ? "chain" : "chain_file", at, ex.what());
    }
  }
  if (e.kind == "finite_lab" && e.size("n_states") < 2) fail("n_states", at, "need at least 2 states");
  if (e.kind == "cross_oracle" && e.size("n_states") < 2) fail("n_states", at, "need at least 2 states");
  return e;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v;
    for (const auto& s : schemas()) v.push_back(s.kind);
    return v;
  }();
  return k;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& err) {
    std::ostringstream os;
    os << "line " << err.source().begin.line << ": " << err.description();
    throw ConfigError("<syntax>", err.source().begin.line, os.str());
  }
  const auto base = std::filesystem::path(origin).parent_path();
  RunConfig cfg;
  cfg.source_text = text;
  bool have_seed = false;
  for (const auto& [key_view, node] : root) {
    const std::string key(key_view.str());
    if (key == "seed") {
      const auto v = node.value_exact<std::int64_t>();
      if (!v || *v < 0) fail(key, node, "expected a nonnegative integer");
      cfg.seed = static_cast<std::uint64_t>(*v);
      have_seed = true;
    } else if (key == "threads") {
      const auto v = node.value_exact<std::int64_t>();
      if (!v || *v < 1) fail(key, node, "expected a positive integer");
      cfg.threads = static_cast<unsigned>(*v);
    } else if (key == "out") {
      const auto v = node.value<std::string>();
      if (!v) fail(key, node, "expected a path string");
      cfg.out_dir = *v;
    } else if (key == "experiment") {
      const auto* arr = node.as_array();
      if (!arr) fail(key, node, "use [[experiment]] tables");
      std::set<std::string> names;
      for (const auto& item : *arr) {
        const auto* t = item.as_table();
        if (!t) fail(key, item, "expected a table");
        auto e = experiment_of(*t, item, base);
        if (!names.insert(e.name).second) fail("name", item, "duplicate experiment name '" + e.name + "'");
        cfg.experiments.push_back(std::move(e));
      }
    } else {
      fail(key, node, "unknown top-level field");
    }
  }
  if (cfg.experiments.empty()) throw ConfigError("experiment", 0, "config defines no [[experiment]]");
  cfg.seed_set = have_seed;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", 0, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n = {"exact", "mc-fast", "mc-full"};
  return n;
}

namespace {

constexpr const char* kTwoThirds = R"(law = { kind = "lattice", entries = [[-1, "2/3"], [2, "1/3"]] })";
constexpr const char* kRademacher = R"(law = { kind = "lattice", entries = [[-1, "1/2"], [1, "1/2"]] })";
constexpr const char* kGaussian = R"(law = { kind = "gaussian", sigma = 1.0 })";
constexpr const char* kSimple2d =
    R"(law = { kind = "lattice", entries = [[[1, 0], "1/4"], [[-1, 0], "1/4"], [[0, 1], "1/4"], [[0, -1], "1/4"]] })";

std::string exact_suite_text() {
  return R"(seed = 1

[[experiment]]
kind = "finite_lab"
name = "finite_lab/random6"
n_chains = 100
n_states = 6

[[experiment]]
kind = "finite_lab"
name = "finite_lab/cycle3"
chain = """
n 3
P
0 1 0
0 0 1
1 0 0
A 0 1
"""

[[experiment]]
kind = "finite_lab"
name = "finite_lab/birth_death5"
chain = """
n 5
P
1/2 1/2 0 0 0
1/3 1/3 1/3 0 0
0 1/4 1/2 1/4 0
0 0 1/3 1/3 1/3
0 0 0 1/2 1/2
A 2 3
"""
)";
}

std::string mc_fast_text() {
  std::ostringstream os;
  os << "seed = 1\n\n"
     << "[[experiment]]\nkind = \"stationarity\"\nname = \"stationarity/gaussian\"\n" << kGaussian
     << "\nn_samples = 20000\n\n"
     << "[[experiment]]\nkind = \"alternation\"\nname = \"alternation/gaussian\"\n" << kGaussian
     << "\nn_samples = 20000\n\n"
     << "[[experiment]]\nkind = \"alternation\"\nname = \"alternation/two_thirds\"\n" << kTwoThirds
     << "\nn_samples = 20000\n\n"
     << "[[experiment]]\nkind = \"lln_overshoots\"\nname = \"lln/rademacher\"\n" << kRademacher
     << "\nstarts = [0, 50, -17]\nn_crossings = 2000\ntolerance = 0.05\n\n"
     << "[[experiment]]\nkind = \"lln_overshoots\"\nname = \"lln/two_thirds\"\n" << kTwoThirds
     << "\nstarts = [0, 50, -17]\nn_crossings = 2000\ntolerance = 0.05\n\n"
     << "[[experiment]]\nkind = \"lln_overshoots\"\nname = \"lln/gaussian\"\n" << kGaussian
     << "\nstarts = [0, 7.3, -2.718281828459045]\nn_crossings = 2000\ntolerance = 0.05\n\n"
     << "[[experiment]]\nkind = \"cross_oracle\"\nname = \"cross_oracle\"\nsamples_per_row = 20000\ntolerance = 0.02\n";
  return os.str();
}

std::string mc_full_text() {
  std::ostringstream os;
  os << "seed = 1\n\n"
     << "[[experiment]]\nkind = \"stationarity\"\nname = \"stationarity/gaussian\"\n" << kGaussian << "\n\n"
     << "[[experiment]]\nkind = \"stationarity\"\nname = \"stationarity/two_thirds\"\n" << kTwoThirds << "\n\n"
     << "[[experiment]]\nkind = \"alternation\"\nname = \"alternation/gaussian\"\n" << kGaussian << "\n\n"
     << "[[experiment]]\nkind = \"alternation\"\nname = \"alternation/two_thirds\"\n" << kTwoThirds << "\n\n";
  const std::pair<const char*, const char*> laws1d[] = {
      {"gaussian", kGaussian}, {"rademacher", kRademacher}, {"two_thirds", kTwoThirds}};
  for (const auto& [nm, law] : laws1d) {
    const bool cont = std::string(nm) == "gaussian";
    os << "[[experiment]]\nkind = \"lln_overshoots\"\nname = \"lln/" << nm << "\"\n" << law << '\n'
       << (cont ? "starts = [0, 7.3, -2.718281828459045]\n" : "starts = [0, 50, -17]\n") << '\n';
    os << "[[experiment]]\nkind = \"clt_level_crossings\"\nname = \"clt/" << nm << "\"\n" << law << '\n'
       << (cont ? "starts = [0, 0.3535533905932738, -0.5]\n" : "starts = [0, 1, -1]\n") << '\n';
  }
  for (const auto& [nm, law] : {std::pair{"rademacher", kRademacher}, std::pair{"two_thirds", kTwoThirds}}) {
    os << "[[experiment]]\nkind = \"expected_crossings\"\nname = \"crossings/" << nm << "\"\n" << law
       << "\nlevels = [0, 1, 2, 5]\n\n";
    os << "[[experiment]]\nkind = \"kac_mc\"\nname = \"kac/" << nm << "\"\n" << law << "\nwindow = [-3, 3]\n\n";
  }
  os << "[[experiment]]\nkind = \"hopf_ratio\"\nname = \"hopf/simple2d_10\"\n" << kSimple2d
     << "\nB1 = [[0, 0]]\nB2 = [[1, 0]]\n\n"
     << "[[experiment]]\nkind = \"cross_oracle\"\nname = \"cross_oracle\"\n\n";
  os << exact_suite_text().substr(std::string("seed = 1\n").size());
  return os.str();
}

}  // namespace

RunConfig builtin_suite(const std::string& name) {
  std::string text;
  if (name == "exact")
    text = exact_suite_text();
  else if (name == "mc-fast")
    text = mc_fast_text();
  else if (name == "mc-full")
    text = mc_full_text();
  else
    throw ConfigError("suite", 0, "unknown suite '" + name + "' (exact, mc-fast, mc-full)");
  auto cfg = parse_config(text, "suite:" + name);
  cfg.out_dir = "entrex-out/" + name;
  return cfg;
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(cfg.source_text); }

std::uint64_t experiment_seed(std::uint64_t master, const std::string& name) {
  return derive_seed(master, fnv1a64(name));
}

std::vector<ExperimentReport> run_experiment(const ExperimentConfig& e, std::uint64_t master_seed,
                                             unsigned threads, const std::string& csv_dir,
                                             const std::string& provenance) {
  const RunOptions opt{experiment_seed(master_seed, e.name), threads};
  std::vector<ExperimentReport> out;
  auto tol = [&](const char* k) { return e.tolerance(k); };
  if (e.kind == "finite_lab") {
    if (!e.chain_text.empty())
      out.push_back(finite_lab_chain(e.chain_text, e.name, opt));
    else
      out = finite_lab_suite(static_cast<int>(e.size("n_chains")), static_cast<int>(e.size("n_states")), opt);
    for (std::size_t i = 0; e.chain_text.empty() && i < out.size(); ++i)
      out[i].name = e.name + "/chain" + std::to_string(i);
  } else if (e.kind == "cross_oracle") {
    out = cross_oracle(static_cast<int>(e.size("n_chains")), static_cast<int>(e.size("n_states")),
                       e.size("samples_per_row"), tol("tolerance"), opt);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].name = e.name + "/chain" + std::to_string(i);
  } else if (e.kind == "stationarity") {
    out.push_back(stationarity_test(*e.law, e.size("n_samples"), e.size("horizon"), opt));
  } else if (e.kind == "alternation") {
    out = alternation_test(*e.law, e.size("n_samples"), e.size("horizon"), opt);
  } else if (e.kind == "lln_overshoots") {
    out = lln_overshoots(*e.law, e.starts, e.size("n_crossings"), e.size("max_steps"), tol("tolerance"), opt);
  } else if (e.kind == "clt_level_crossings") {
    out = clt_level_crossings(*e.law, e.starts, e.size("n_steps"), e.size("n_replicas"), tol("tolerance"),
                              tol("mean_tolerance"), opt, e.write_csv ? csv_dir : std::string(), provenance);
  } else if (e.kind == "expected_crossings") {
    out = expected_crossings(*e.law, e.levels, e.size("n_excursions"), e.size("horizon"), tol("tolerance"), opt);
  } else if (e.kind == "kac_mc") {
    out.push_back(kac_mc_test(*e.law, e.window_lo, e.window_hi, e.size("n_excursions"), e.size("horizon"),
                              tol("tolerance"), opt));
  } else if (e.kind == "hopf_ratio") {
    out.push_back(hopf_ratio_test(*e.law, e.B1, e.B2, e.start, e.size("n_entrances"), e.size("replicas"),
                                  e.size("horizon"), tol("tolerance"), opt));
  } else {
    throw ConfigError("kind", 0, "unhandled kind " + e.kind);
  }
  return out;
}

bool RunSummary::all_pass() const {
  if (interrupted || !errors.empty()) return false;
  return std::all_of(reports.begin(), reports.end(), [](const ExperimentReport& r) { return r.pass; });
}

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

struct Outcome {
  bool done = false;
  std::vector<ExperimentReport> reports;
  std::string error;
};

}  // namespace

RunSummary run_config(const RunConfig& cfg, std::ostream& log, const std::atomic<bool>* stop) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string hash = hex16(config_hash(cfg));
  std::ostringstream prov;
  prov << "config_hash=" << hash << " seed=" << cfg.seed;
  const std::string csv_dir = (fs::path(cfg.out_dir) / "csv").string();

  std::ofstream jsonl(fs::path(cfg.out_dir) / "report.jsonl");
  const std::size_t n = cfg.experiments.size();
  std::vector<Outcome> outcomes(n);
  std::size_t written = 0;
  std::mutex mu;

  auto emit = [&](std::size_t i) {
    const auto& e = cfg.experiments[i];
    for (const auto& r : outcomes[i].reports) {
      auto j = r.to_json();
      j["config_hash"] = hash;
      j["master_seed"] = cfg.seed;
      jsonl << j.dump() << '\n';
    }
    if (!outcomes[i].error.empty()) {
      nlohmann::json j = {{"experiment", e.kind}, {"name", e.name},       {"verdict", "error"},
                          {"error", outcomes[i].error}, {"config_hash", hash}, {"master_seed", cfg.seed}};
      jsonl << j.dump() << '\n';
    }
    jsonl.flush();
  };

  // Few experiments: run them one at a time with all threads inside each.
  const bool across = n >= cfg.threads && cfg.threads > 1;
  const unsigned inner = across ? 1u : cfg.threads;
  run_blocks(n, across ? cfg.threads : 1u, [&](std::size_t i) {
    if (stop && stop->load()) return 0;
    const auto& e = cfg.experiments[i];
    Outcome o;
    try {
      o.reports = run_experiment(e, cfg.seed, inner, csv_dir, prov.str());
    } catch (const std::exception& ex) {
      o.error = ex.what();
    }
    o.done = true;
    std::lock_guard lock(mu);
    std::size_t pass = 0;
    for (const auto& r : o.reports) pass += r.pass;
    log << "[" << e.name << "] " << (o.error.empty() ? "" : "error: " + o.error + " ") << pass << '/'
        << o.reports.size() << " pass\n"
        << std::flush;
    outcomes[i] = std::move(o);
    while (written < n && outcomes[written].done) emit(written++);
    return 0;
  });

  RunSummary s;
  for (std::size_t i = 0; i < n; ++i) {
    if (!outcomes[i].done) {
      s.interrupted = true;
      continue;
    }
    if (i >= written) emit(i);  // out-of-order leftovers after an interrupt
    for (auto& r : outcomes[i].reports) s.reports.push_back(r);
    if (!outcomes[i].error.empty()) s.errors.push_back(cfg.experiments[i].name + ": " + outcomes[i].error);
  }
  std::ofstream summary(fs::path(cfg.out_dir) / "summary.txt");
  summary << "# " << prov.str() << '\n';
  print_summary(summary, s);
  return s;
}

void print_summary(std::ostream& os, const RunSummary& s) {
  std::size_t width = 4;
  for (const auto& r : s.reports) width = std::max(width, r.name.size());
  os << std::left << std::setw(static_cast<int>(width)) << "name" << "  " << std::setw(12) << "statistic"
     << std::setw(12) << "target" << std::setw(12) << "tolerance" << std::setw(12) << "censor" << std::setw(9)
     << "seconds"
     << "verdict\n";
  std::size_t pass = 0;
  for (const auto& r : s.reports) {
    pass += r.pass;
    os << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << std::setw(12)
       << std::setprecision(6) << r.statistic << std::setw(12) << r.target << std::setw(12) << r.tolerance
       << std::setw(12) << std::setprecision(3) << r.censor_rate << std::setw(9) << std::fixed
       << std::setprecision(2) << r.runtime_s << std::defaultfloat << (r.pass ? std::string("PASS") : r.verdict() == "censored" ? std::string("CENSORED") : std::string("FAIL")) << '\n';
  }
  for (const auto& e : s.errors) os << "ERROR " << e << '\n';
  if (s.interrupted) os << "INTERRUPTED: some experiments did not run\n";
  os << pass << '/' << s.reports.size() << " records pass\n";
}

}  // namespace entrex
