#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secagg/benchmark.hpp"
#include "secagg/errors.hpp"
#include "secagg/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitSelftest = 4;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_or_print(const std::string& out_dir, const std::string& filename,
                    const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / filename);
  f << content;
  std::cerr << "wrote " << (std::filesystem::path(out_dir) / filename).string() << "\n";
}

int cmd_run(const std::string& config_path, uint64_t seed_override, bool has_seed,
            const std::string& out_dir, const std::string& format) {
  std::ifstream f(config_path);
  if (!f) {
    std::cerr << "cannot open config file " << config_path << "\n";
    return kExitConfig;
  }
  std::stringstream buf;
  buf << f.rdbuf();

  secagg::ExperimentConfig cfg;
  try {
    cfg = secagg::ExperimentConfig::from_json_text(buf.str());
    if (has_seed) cfg.seed = seed_override;
    if (!out_dir.empty()) cfg.out = out_dir;
    cfg.validate();
  } catch (const secagg::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  secagg::ExperimentResult result;
  try {
    result = secagg::run_experiment(cfg);
  } catch (const secagg::Error& e) {
    std::cerr << "protocol abort: " << e.what() << "\n";
    return kExitProtocol;
  }

  std::ostringstream body;
  if (format == "csv") {
    body << secagg::RoundReport::csv_header() << '\n';
    for (const auto& r : result.rounds) body << r.to_csv_line() << '\n';
  } else {
    for (const auto& r : result.rounds) body << r.to_json_line() << '\n';
  }
  write_or_print(cfg.out, format == "csv" ? "rounds.csv" : "rounds.jsonl", body.str());
  std::cerr << "final metric (test MSE): " << result.final_metric << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& schemes, const std::string& dims, const std::string& cohorts,
              const std::string& profile, uint64_t seed, const std::string& out_dir,
              bool naive_jl) {
  secagg::BenchConfig cfg;
  try {
    cfg.packed_jl = !naive_jl;
    cfg.schemes.clear();
    for (const auto& s : split_csv(schemes)) cfg.schemes.push_back(secagg::parse_scheme(s));
    cfg.dims.clear();
    for (const auto& d : split_csv(dims)) {
      double v = std::stod(d);  // accepts forms like 1e4
      if (v < 1) throw std::invalid_argument("dimension must be >= 1");
      cfg.dims.push_back(static_cast<uint64_t>(v));
    }
    cfg.cohorts.clear();
    for (const auto& n : split_csv(cohorts)) cfg.cohorts.push_back(std::stoul(n));
    cfg.profile = secagg::parse_profile(profile);
    cfg.seed = seed;
  } catch (const secagg::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "bad benchmark arguments: " << e.what() << "\n";
    return kExitConfig;
  }

  secagg::BenchResult result;
  try {
    result = secagg::run_benchmark(cfg);
  } catch (const secagg::Error& e) {
    std::cerr << "benchmark failed: " << e.what() << "\n";
    return kExitProtocol;
  }
  write_or_print(out_dir, "bench.csv", result.to_csv());

  // Shape summary when both schemes were measured.
  bool has_jl = false, has_lom = false;
  for (auto s : cfg.schemes) {
    has_jl |= s == secagg::Scheme::jl;
    has_lom |= s == secagg::Scheme::lom;
  }
  if (has_jl && has_lom && !cfg.dims.empty()) {
    unsigned n = cfg.cohorts.front();
    uint64_t dmax = *std::max_element(cfg.dims.begin(), cfg.dims.end());
    double jl_t = result.median_of("jl", "protect", dmax, n);
    double lom_t = result.median_of("lom", "protect", dmax, n);
    if (jl_t > 0 && lom_t > 0)
      std::cerr << "protect ratio jl/lom at d=" << dmax << ": " << jl_t / lom_t << "\n";
    if (cfg.dims.size() >= 2) {
      std::vector<double> times;
      for (uint64_t d : cfg.dims) times.push_back(result.median_of("jl", "protect", d, n));
      std::cerr << "jl protect log-log slope: " << secagg::loglog_slope(cfg.dims, times) << "\n";
    }
  }
  return kExitOk;
}

int cmd_selftest() {
  auto results = secagg::selftest();
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass && !r.detail.empty()) std::cout << " -- " << r.detail;
    std::cout << "\n";
    all_pass &= r.pass;
  }
  return all_pass ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secagg: secure-aggregation toolkit for cross-silo federated learning"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "json";
  uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a federated experiment from a JSON config");
  run->add_option("--config", config_path, "Path to the experiment JSON config")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory (default: stdout)");
  run->add_option("--format", format, "Round report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string schemes = "jl,lom", dims = "1e2,1e3,1e4", cohorts = "3", profile = "test";
  uint64_t bench_seed = 42;
  std::string bench_out;
  bool naive_jl = false;
  auto* bench = app.add_subcommand("bench", "Time protect/aggregate across schemes and sizes");
  bench->add_option("--scheme", schemes, "Comma-separated schemes (jl,lom)");
  bench->add_option("--dims", dims, "Comma-separated vector sizes, e.g. 1e2,1e4,1e6");
  bench->add_option("--n", cohorts, "Comma-separated cohort sizes");
  bench->add_option("--profile", profile, "Security profile: test | prod")
      ->check(CLI::IsMember({"test", "prod", "production"}));
  bench->add_option("--seed", bench_seed, "Benchmark input seed");
  bench->add_option("--out", bench_out, "Output directory (default: stdout)");
  bench->add_flag("--naive-jl", naive_jl, "Benchmark JL without vector packing");

  auto* st = app.add_subcommand("selftest", "Run the full invariant suite");
  (void)st;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (app.got_subcommand("run"))
    return cmd_run(config_path, seed, seed_opt->count() > 0, out_dir, format);
  if (app.got_subcommand("bench"))
    return cmd_bench(schemes, dims, cohorts, profile, bench_seed, bench_out, naive_jl);
  return cmd_selftest();
}
