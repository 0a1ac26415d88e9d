// Acceptance gate: end-to-end reproduction checks against the reference
// results, one PASS/FAIL line per criterion. Default is the desk scale
// (10^4-symbol CCDF, quantiles read at 1e-3); --full runs the full-scale
// experiment (10^5 symbols, quantiles at 1e-4) with its tighter tolerances.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "paprsim/evaluator.hpp"
#include "paprsim/harness.hpp"
#include "paprsim/ofdm.hpp"
#include "paprsim/optimizers.hpp"
#include "paprsim/rng.hpp"
#include "paprsim/selftest.hpp"

using namespace paprsim;

namespace {

int g_failures = 0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", idx, name,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

const CcdfCurve& curve_of(const CcdfResult& res, Method m) {
  for (const CcdfCurve& c : res.curves)
    if (c.method == m) return c;
  throw std::logic_error("curve not found");
}

// quantile read with failure folded into the detail string
double quantile(const CcdfCurve& c, double q, bool& ok) {
  try {
    return papr_at_ccdf(c, q);
  } catch (const std::exception&) {
    ok = false;
    return std::nan("");
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SubblockSet seeded_set(int n, int m, int l, uint64_t block_seed, uint64_t part_seed) {
  Rng rng(block_seed);
  FreqBlock block = random_qpsk_block(rng, n);
  Partition part = make_partition(n, m, PartitionScheme::random, part_seed);
  return split_and_transform(block, part, l);
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  int workers = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--full")) {
      full = true;
    } else if (!std::strcmp(argv[i], "--workers") && i + 1 < argc) {
      workers = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--full] [--workers N]\n");
      return 2;
    }
  }

  const int64_t ccdf_symbols = full ? 100000 : 10000;
  const double q_anchor = full ? 1e-4 : 1e-3;
  std::printf("acceptance: %s scale, %lld ccdf symbols, anchors read at ccdf=%g\n",
              full ? "full" : "desk", static_cast<long long>(ccdf_symbols), q_anchor);

  // ---- shared CCDF experiment for criteria 1-4 --------------------------
  ExperimentConfig cfg;
  cfg.n_symbols = ccdf_symbols;
  cfg.master_seed = 20260816;
  cfg.workers = workers;

  auto t0 = std::chrono::steady_clock::now();
  CcdfResult ccdf = run_ccdf(cfg);
  std::printf("ccdf experiment: %.1f s\n", seconds_since(t0));

  const CcdfCurve& none = curve_of(ccdf, Method::none);
  const CcdfCurve& opts = curve_of(ccdf, Method::opts);
  const CcdfCurve& ipts_c = curve_of(ccdf, Method::ipts);
  const CcdfCurve& pmce = curve_of(ccdf, Method::pmce);

  {
    // conventional OFDM: 12 dB at ccdf 1e-4; the same curve's trend puts the
    // 1e-3 point at 11.3 dB for the desk scale
    const double center = full ? 12.0 : 11.3;
    const double tol = 0.3;
    bool ok = true;
    const double got = quantile(none, q_anchor, ok);
    ok = ok && std::abs(got - center) <= tol;
    report(1, "conventional ccdf anchor", ok,
           fmt("papr@%g = %.3f dB, want %.1f +/- %.1f", q_anchor, got, center, tol));
  }

  {
    const double center = 7.4;
    const double tol = full ? 0.3 : 0.4;
    bool ok = true;
    const double got = quantile(opts, q_anchor, ok);
    ok = ok && std::abs(got - center) <= tol;
    report(2, "opts ccdf anchor", ok,
           fmt("papr@%g = %.3f dB, want %.1f +/- %.1f", q_anchor, got, center, tol));
  }

  {
    const double quantiles[] = {1e-1, 3.162277660168379e-2, 1e-2,
                                3.162277660168379e-3, 1e-3};
    bool ok = true;
    double worst = 0.0, worst_q = 0.0;
    for (double q : quantiles) {
      const double a = quantile(pmce, q, ok);
      const double b = quantile(opts, q, ok);
      const double d = std::abs(a - b);
      if (d > worst) {
        worst = d;
        worst_q = q;
      }
    }
    ok = ok && worst <= 0.2;
    report(3, "pmce tracks opts", ok,
           fmt("max |pmce-opts| over ccdf in [1e-3,1e-1] = %.3f dB at ccdf=%g, "
               "want <= 0.2",
               worst, worst_q));
  }

  {
    const double min_gap = full ? 0.8 : 0.4;
    bool ok = true;
    const double gi = quantile(ipts_c, 1e-3, ok);
    const double go = quantile(opts, 1e-3, ok);
    ok = ok && (gi - go >= min_gap);
    report(4, "ipts trails opts", ok,
           fmt("ipts-opts gap at ccdf 1e-3 = %.3f dB, want >= %.1f", gi - go, min_gap));
  }

  // ---- criterion 5: search-count ordering -------------------------------
  {
    ExperimentConfig scfg;
    scfg.n_symbols = 1000;
    scfg.master_seed = 20260817;
    scfg.workers = workers;
    scfg.methods = {Method::opts, Method::ipts, Method::ce, Method::pmce};
    std::vector<double> thresholds;
    for (int i = 0; i <= 8; ++i) thresholds.push_back(7.0 + 0.25 * i);

    t0 = std::chrono::steady_clock::now();
    SearchCountResult sc = run_search_count(scfg, thresholds);
    std::printf("search-count experiment: %.1f s\n", seconds_since(t0));

    size_t i_opts = 0, i_ce = 0, i_pmce = 0;
    for (size_t mi = 0; mi < sc.methods.size(); ++mi) {
      if (sc.methods[mi] == Method::opts) i_opts = mi;
      if (sc.methods[mi] == Method::ce) i_ce = mi;
      if (sc.methods[mi] == Method::pmce) i_pmce = mi;
    }

    bool le_opts = true, le_ce = true, monotone = true;
    std::string bad_opts, bad_ce;
    for (size_t ti = 0; ti < sc.stats.size(); ++ti) {
      const SearchStats& st = sc.stats[ti];
      if (st.avg_evaluations[i_pmce] > st.avg_evaluations[i_opts] + 1e-9) {
        le_opts = false;
        bad_opts += fmt(" %.2f(+%.2f)", st.threshold_db,
                        st.avg_evaluations[i_pmce] - st.avg_evaluations[i_opts]);
      }
      if (st.threshold_db <= 7.75 + 1e-9 &&
          st.avg_evaluations[i_pmce] > st.avg_evaluations[i_ce] + 1e-9) {
        le_ce = false;
        bad_ce += fmt(" %.2f(+%.2f)", st.threshold_db,
                      st.avg_evaluations[i_pmce] - st.avg_evaluations[i_ce]);
      }
      if (ti > 0)
        for (size_t mi = 0; mi < sc.methods.size(); ++mi)
          if (st.avg_evaluations[mi] > sc.stats[ti - 1].avg_evaluations[mi] + 1e-9)
            monotone = false;
    }
    std::string table = "avg evals (T: opts ce pmce):";
    for (const SearchStats& st : sc.stats)
      table += fmt(" %.2f: %.1f %.2f %.2f;", st.threshold_db,
                   st.avg_evaluations[i_opts], st.avg_evaluations[i_ce],
                   st.avg_evaluations[i_pmce]);
    std::string verdicts = fmt("pmce<=opts %s, pmce<=ce on [7,7.75] %s, monotone %s",
                               le_opts ? "yes" : "NO", le_ce ? "yes" : "NO",
                               monotone ? "yes" : "NO");
    if (!bad_opts.empty()) verdicts += " | pmce>opts at:" + bad_opts;
    if (!bad_ce.empty()) verdicts += " | pmce>ce at:" + bad_ce;
    report(5, "search-count ordering", le_opts && le_ce && monotone,
           fmt("%s | %s", verdicts.c_str(), table.c_str()));
  }

  // ---- criterion 6: oracle equivalence on small instances ---------------
  {
    t0 = std::chrono::steady_clock::now();
    int opts_exact = 0, ce_hits = 0, pmce_hits = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      SubblockSet set =
          seeded_set(256, 4, 4, 42000 + uint64_t(rep), 43000 + uint64_t(rep));
      Objective obj(set);
      oracle::BruteForce bf = oracle::brute_force(set, 2);

      OptResult o = opts_exhaustive(obj, 2);
      worst = std::max(worst, std::abs(o.best_papr.ratio - bf.best_ratio));
      if (std::abs(o.best_papr.ratio - bf.best_ratio) <= 1e-12) ++opts_exact;

      PmceConfig pc;
      pc.max_iterations = 20;
      pc.seed = 44000 + uint64_t(rep);
      if (ce_optimize(obj, pc).best_papr.ratio <= bf.best_ratio + 1e-9) ++ce_hits;
      if (pmce_optimize(obj, pc).best_papr.ratio <= bf.best_ratio + 1e-9) ++pmce_hits;
    }
    std::printf("oracle comparison: %.1f s\n", seconds_since(t0));
    const bool ok = opts_exact == 100 && ce_hits >= 95 && pmce_hits >= 95;
    report(6, "brute-force oracle", ok,
           fmt("opts exact %d/100 (worst |diff| %.2e), ce optimum %d/100, "
               "pmce optimum %d/100, want 100/>=95/>=95",
               opts_exact, worst, ce_hits, pmce_hits));
  }

  // ---- criterion 7: lambda solver ---------------------------------------
  {
    Rng rng(777);
    int bad = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
      const size_t j = 2 + rng.below(49);
      std::vector<double> f(j);
      double fmin = 1e30, fsum = 0.0;
      for (double& v : f) {
        v = 10.0 * rng.uniform();
        fmin = std::min(fmin, v);
        fsum += v;
      }
      const double fmean = fsum / static_cast<double>(j);
      const double gamma = fmin + rng.uniform() * (fmean - fmin);
      const double g = oracle::weighted_mean(f, solve_lambda(f, gamma));
      const double err = std::abs(g - gamma);
      worst = std::max(worst, err);
      if (err > 1e-8) ++bad;
    }
    const double closed = solve_lambda(std::vector<double>{1.0, 3.0}, 1.5);
    const double closed_err = std::abs(closed - std::log(3.0) / 2.0);
    const bool ok = bad == 0 && closed_err <= 1e-8;
    report(7, "lambda solver", ok,
           fmt("randomized: %d/10000 above 1e-8 (worst %.2e); closed form "
               "|lambda - ln(3)/2| = %.2e, want <= 1e-8",
               bad, worst, closed_err));
  }

  // ---- criterion 8: embedded invariant suite ----------------------------
  {
    std::ostringstream sink;
    const int failed = selftest(sink, false);
    report(8, "invariant selftest", failed == 0,
           failed == 0 ? "all checks passed"
                       : fmt("%d checks failed:\n%s", failed, sink.str().c_str()));
  }

  std::printf("acceptance: %d/8 criteria passed\n", 8 - g_failures);
  return g_failures;
}
