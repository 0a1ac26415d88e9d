#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "paprsim/optimizers.hpp"
#include "paprsim/pts.hpp"

namespace paprsim {

enum class Method { none, opts, ipts, ce, pmce };

const char* method_name(Method m);
Method method_from_name(std::string_view name);  // throws std::invalid_argument

// Full experiment description. Defaults reproduce the reference setup:
// N=256 QPSK, M=8 random partition, W=2, L=4, 1e5 symbols.
struct ExperimentConfig {
  int n_subcarriers = 256;
  int m_subblocks = 8;
  int w_alphabet = 2;
  int oversampling = 4;
  int64_t n_symbols = 100000;
  std::vector<Method> methods = {Method::none, Method::opts, Method::ipts,
                                 Method::ce, Method::pmce};
  PartitionScheme scheme = PartitionScheme::random;
  PmceConfig pmce;  // pmce.seed is ignored; per-symbol seeds come from master_seed
  uint64_t master_seed = 1;

  // CCDF threshold grid in dB
  double grid_min_db = 4.0;
  double grid_max_db = 13.0;
  double grid_step_db = 0.05;

  uint64_t opts_budget_cap = uint64_t(1) << 20;

  // search-count experiment: thresholds swept, and an optional cap on the
  // evaluations a single search may consume (0 = free-running)
  std::vector<double> thresholds_db = {7.0, 7.25, 7.5, 7.75, 8.0,
                                       8.25, 8.5, 8.75, 9.0};
  uint64_t search_eval_budget = 0;

  int workers = 0;  // 0 = use hardware concurrency

  void validate() const;          // throws naming the offending field
  std::vector<double> grid() const;
  bool has_method(Method m) const;
};

enum class SeedPurpose : uint64_t { bits = 1, partition = 2, optimizer = 3 };

// Per-symbol, per-purpose seed derivation. Fixed chain of splitmix64
// finalizer mixes: mix64(mix64(mix64(master) ^ symbol_index) ^ purpose).
// Results depend only on the three inputs, so any worker layout reproduces
// the same streams.
uint64_t seed_stream(uint64_t master_seed, uint64_t symbol_index, SeedPurpose purpose);

struct CcdfCurve {
  Method method = Method::none;
  std::vector<double> grid_db;
  std::vector<uint64_t> exceed;  // #symbols with PAPR strictly above grid_db[i]
  std::vector<double> prob;      // exceed / n_symbols
  int64_t n_symbols = 0;
};

struct CcdfResult {
  ExperimentConfig config;
  std::vector<CcdfCurve> curves;          // one per config.methods entry
  std::vector<double> avg_evaluations;    // per method, mean per symbol
};

struct SearchStats {
  double threshold_db = 0.0;
  std::vector<uint64_t> total_evaluations;  // per method
  std::vector<double> avg_evaluations;
  int64_t n_symbols = 0;
};

struct SearchCountResult {
  ExperimentConfig config;
  std::vector<Method> methods;  // config order, Method::none excluded
  std::vector<SearchStats> stats;  // one per threshold, config order
};

struct SingleResult {
  ExperimentConfig config;
  Method method = Method::none;
  Partition partition;
  PaprValue baseline;            // PAPR with all phase factors +1
  OptResult opt;
  std::vector<double> eval_db;   // PAPR of every evaluated candidate, in order
};

using ProgressFn = std::function<void(int64_t done, int64_t total)>;

CcdfResult run_ccdf(const ExperimentConfig& cfg, const ProgressFn& progress = {});
SearchCountResult run_search_count(const ExperimentConfig& cfg,
                                   const std::vector<double>& thresholds_db,
                                   const ProgressFn& progress = {});
SingleResult run_single(const ExperimentConfig& cfg, Method method);

// Threshold (dB) where the curve crosses a target exceedance probability,
// interpolated in log10(prob). Throws std::out_of_range if the curve never
// reaches the target.
double papr_at_ccdf(const CcdfCurve& curve, double target_prob);

}  // namespace paprsim
