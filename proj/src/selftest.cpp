#include "paprsim/selftest.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "paprsim/evaluator.hpp"
#include "paprsim/harness.hpp"
#include "paprsim/ofdm.hpp"
#include "paprsim/pts.hpp"
#include "paprsim/rng.hpp"
#include "paprsim/serialize.hpp"

namespace paprsim {

namespace {

struct Reporter {
  std::ostream& out;
  bool verbose;
  int failures = 0;

  void check(bool ok, const std::string& name, const std::string& detail = "") {
    if (ok) {
      if (verbose) out << "[ok]   " << name << "\n";
    } else {
      ++failures;
      out << "[FAIL] " << name << (detail.empty() ? "" : ": " + detail) << "\n";
    }
  }
};

double sum_power(const std::vector<cxd>& v) {
  double s = 0.0;
  for (const cxd& z : v) s += std::norm(z);
  return s;
}

void check_parseval(Reporter& r) {
  Rng rng(11);
  FreqBlock block = random_qpsk_block(rng, 64);
  TimeSignal x = idft_oversampled(block, 1);
  double pt = sum_power(x.samples);
  double pf = sum_power(block.symbols);
  r.check(std::abs(pt - pf) <= 1e-9 * pf, "parseval (L=1)",
          "time power " + std::to_string(pt) + " vs freq power " + std::to_string(pf));
}

void check_scale_invariance(Reporter& r) {
  Rng rng(12);
  FreqBlock block = random_qpsk_block(rng, 64);
  TimeSignal x = idft_oversampled(block, 4);
  PaprValue before = papr(x);
  const cxd scale(2.5, -1.3);
  for (cxd& z : x.samples) z *= scale;
  PaprValue after = papr(x);
  r.check(std::abs(after.ratio - before.ratio) <= 1e-12 * before.ratio,
          "papr scale invariance");
}

void check_partition_cover(Reporter& r) {
  struct Case {
    PartitionScheme scheme;
    int n, m;
    uint64_t seed;
  };
  const Case cases[] = {
      {PartitionScheme::random, 64, 8, 3},
      {PartitionScheme::interleaved, 64, 8, 0},
      {PartitionScheme::adjacent, 64, 8, 0},
      {PartitionScheme::adjacent, 10, 4, 0},  // M does not divide N
  };
  for (const Case& c : cases) {
    Partition p = make_partition(c.n, c.m, c.scheme, c.seed);
    std::vector<int> count(static_cast<size_t>(c.m), 0);
    bool in_range = static_cast<int>(p.assignment.size()) == c.n;
    for (int a : p.assignment) {
      if (a < 0 || a >= c.m) {
        in_range = false;
        break;
      }
      ++count[static_cast<size_t>(a)];
    }
    int lo = c.n, hi = 0, total = 0;
    for (int k : count) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
      total += k;
    }
    const std::string name = std::string("partition disjoint-cover (") +
                             scheme_name(c.scheme) + " N=" + std::to_string(c.n) +
                             " M=" + std::to_string(c.m) + ")";
    r.check(in_range && total == c.n && lo >= 1 && hi - lo <= 1, name);
  }
}

void check_combine_linearity(Reporter& r) {
  Rng rng(6);
  FreqBlock block = random_qpsk_block(rng, 32);
  Partition part = make_partition(32, 4, PartitionScheme::random, 5);
  SubblockSet set = split_and_transform(block, part, 2);

  // reassembling with all factors +1 reproduces the full block's signal
  PhaseVector ones{std::vector<cxd>(4, cxd(1.0, 0.0)), 2};
  TimeSignal direct = idft_oversampled(block, 2);
  TimeSignal stitched = combine(set, ones);
  double worst = 0.0;
  for (size_t i = 0; i < direct.samples.size(); ++i)
    worst = std::max(worst, std::abs(stitched.samples[i] - direct.samples[i]));
  r.check(worst <= 1e-9, "combine reproduces the unsplit signal (all-ones)",
          "max deviation " + std::to_string(worst));

  // additivity in the phase factors
  Rng prng(13);
  PhaseVector b1, b2, b12;
  b1.factors.resize(4);
  b2.factors.resize(4);
  b12.factors.resize(4);
  for (int i = 0; i < 4; ++i) {
    b1.factors[static_cast<size_t>(i)] =
        cxd(2.0 * prng.uniform() - 1.0, 2.0 * prng.uniform() - 1.0);
    b2.factors[static_cast<size_t>(i)] =
        cxd(2.0 * prng.uniform() - 1.0, 2.0 * prng.uniform() - 1.0);
    b12.factors[static_cast<size_t>(i)] =
        b1.factors[static_cast<size_t>(i)] + b2.factors[static_cast<size_t>(i)];
  }
  TimeSignal t1 = combine(set, b1), t2 = combine(set, b2), t12 = combine(set, b12);
  worst = 0.0;
  for (size_t i = 0; i < t12.samples.size(); ++i)
    worst = std::max(worst,
                     std::abs(t1.samples[i] + t2.samples[i] - t12.samples[i]));
  r.check(worst <= 1e-12, "combine linearity", "max deviation " + std::to_string(worst));
}

void check_power_invariance(Reporter& r) {
  Rng rng(8);
  FreqBlock block = random_qpsk_block(rng, 64);
  Partition part = make_partition(64, 8, PartitionScheme::random, 7);
  SubblockSet set = split_and_transform(block, part, 4);

  PhaseVector b{std::vector<cxd>(8, cxd(1.0, 0.0)), 2};
  const double ref = sum_power(combine(set, b).samples);
  double worst = 0.0;
  for (uint64_t mask = 0; mask < 256; ++mask) {
    for (int i = 0; i < 8; ++i)
      b.factors[static_cast<size_t>(i)] =
          ((mask >> i) & 1u) ? cxd(-1.0, 0.0) : cxd(1.0, 0.0);
    const double p = sum_power(combine(set, b).samples);
    worst = std::max(worst, std::abs(p - ref) / ref);
  }
  r.check(worst <= 1e-9, "average power invariant over all 2^8 phase vectors",
          "worst relative deviation " + std::to_string(worst));
}

void check_complement_symmetry(Reporter& r) {
  Rng rng(9);
  FreqBlock block = random_qpsk_block(rng, 64);
  Partition part = make_partition(64, 8, PartitionScheme::random, 10);
  SubblockSet set = split_and_transform(block, part, 4);
  Objective obj(set);

  bool exact = true;
  for (uint64_t mask = 0; mask < 256 && exact; ++mask) {
    const uint64_t comp = ~mask & 0xFFu;
    if (obj.eval_mask(mask).ratio != obj.eval_mask(comp).ratio) exact = false;
    if (objective(set, BinaryVector::from_mask(mask, 8)).ratio !=
        objective(set, BinaryVector::from_mask(comp, 8)).ratio)
      exact = false;
  }
  r.check(exact, "complement symmetry F(c) = F(1-c)");
}

void check_determinism(Reporter& r) {
  ExperimentConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.m_subblocks = 4;
  cfg.oversampling = 2;
  cfg.n_symbols = 200;
  cfg.master_seed = 42;
  cfg.workers = 1;

  const std::string run1 = to_json(run_ccdf(cfg)).dump();
  const std::string run2 = to_json(run_ccdf(cfg)).dump();
  r.check(run1 == run2, "ccdf determinism (same seed, rerun)");

  cfg.workers = 3;
  ExperimentConfig cfg1 = cfg;
  cfg1.workers = 1;
  // the config echo differs by the workers field; compare curves only
  auto strip = [](const ExperimentConfig& c) {
    nlohmann::json j = to_json(run_ccdf(c));
    j.erase("config");
    return j.dump();
  };
  r.check(strip(cfg) == strip(cfg1), "ccdf worker-count independence (3 vs 1)");
}

}  // namespace

int selftest(std::ostream& out, bool verbose) {
  Reporter r{out, verbose};
  check_parseval(r);
  check_scale_invariance(r);
  check_partition_cover(r);
  check_combine_linearity(r);
  check_power_invariance(r);
  check_complement_symmetry(r);
  check_determinism(r);
  if (verbose || r.failures > 0)
    out << (r.failures == 0 ? "selftest: all checks passed\n"
                            : "selftest: " + std::to_string(r.failures) + " check(s) failed\n");
  return r.failures;
}

}  // namespace paprsim
