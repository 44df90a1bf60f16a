#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "secagg/modmath.hpp"
#include "secagg/protocol.hpp"

namespace secagg {

struct BenchConfig {
  std::vector<Scheme> schemes{Scheme::jl, Scheme::lom};
  std::vector<uint64_t> dims{100, 10000};
  std::vector<unsigned> cohorts{3};
  SecurityProfile profile = SecurityProfile::test;
  unsigned sum_bits = 32;
  int samples = 5;  // timed repetitions per cell (one extra warmup)
  uint64_t seed = 42;
  bool packed_jl = true;
};

struct BenchRow {
  std::string scheme;
  uint64_t d = 0;
  unsigned n = 0;
  std::string profile;
  std::string op;  // "protect" | "aggregate"
  double median_s = 0.0;
  double p90_s = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;

  static std::string csv_header() { return "scheme,d,n,profile,op,median_s,p90_s"; }
  std::string to_csv() const;

  // Median for one cell; negative when the cell was not measured.
  double median_of(const std::string& scheme, const std::string& op, uint64_t d, unsigned n) const;
};

BenchResult run_benchmark(const BenchConfig& cfg);

// Least-squares slope of log10(time) against log10(d).
double loglog_slope(std::span<const uint64_t> dims, std::span<const double> times);

}  // namespace secagg
