#include "paprsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "paprsim/evaluator.hpp"
#include "paprsim/ofdm.hpp"
#include "paprsim/rng.hpp"

namespace paprsim {

const char* method_name(Method m) {
  switch (m) {
    case Method::none: return "none";
    case Method::opts: return "opts";
    case Method::ipts: return "ipts";
    case Method::ce: return "ce";
    case Method::pmce: return "pmce";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  if (name == "none") return Method::none;
  if (name == "opts") return Method::opts;
  if (name == "ipts") return Method::ipts;
  if (name == "ce") return Method::ce;
  if (name == "pmce") return Method::pmce;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

uint64_t seed_stream(uint64_t master_seed, uint64_t symbol_index, SeedPurpose purpose) {
  uint64_t z = mix64(master_seed);
  z = mix64(z ^ symbol_index);
  return mix64(z ^ static_cast<uint64_t>(purpose));
}

void ExperimentConfig::validate() const {
  if (n_subcarriers < 1)
    throw std::invalid_argument("n_subcarriers must be >= 1");
  if (m_subblocks < 1 || m_subblocks > 62)
    throw std::invalid_argument("m_subblocks must be in [1, 62]");
  if (w_alphabet < 1) throw std::invalid_argument("w_alphabet must be >= 1");
  if (oversampling < 1) throw std::invalid_argument("oversampling must be >= 1");
  if (n_symbols < 1) throw std::invalid_argument("n_symbols must be >= 1");
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  for (size_t i = 0; i < methods.size(); ++i)
    for (size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j])
        throw std::invalid_argument("methods list contains duplicates");
  if ((has_method(Method::ce) || has_method(Method::pmce)) && w_alphabet != 2)
    throw std::invalid_argument("w_alphabet must be 2 when methods include ce or pmce");
  if (scheme != PartitionScheme::adjacent && n_subcarriers % m_subblocks != 0)
    throw std::invalid_argument(
        std::string("m_subblocks must divide n_subcarriers for the ") +
        scheme_name(scheme) + " partition scheme");
  if (!(grid_step_db > 0.0)) throw std::invalid_argument("grid_step_db must be > 0");
  if (grid_min_db > grid_max_db)
    throw std::invalid_argument("grid_min_db must not exceed grid_max_db");
  if ((grid_max_db - grid_min_db) / grid_step_db > 2e6)
    throw std::invalid_argument("grid_step_db too small for the grid span");
  if (!(pmce.rho > 0.0 && pmce.rho < 1.0))
    throw std::invalid_argument("rho must be in (0, 1)");
  if (!(pmce.alpha > 0.0 && pmce.alpha <= 1.0))
    throw std::invalid_argument("alpha must be in (0, 1]");
  if (pmce.samples_j < 1) throw std::invalid_argument("samples must be >= 1");
  if (pmce.max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
  if (!(pmce.convergence_eps > 0.0))
    throw std::invalid_argument("convergence_eps must be > 0");
  for (double t : thresholds_db)
    if (!std::isfinite(t)) throw std::invalid_argument("thresholds_db must be finite");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (has_method(Method::opts)) {
    uint64_t total = 1;
    for (int i = 0; i < m_subblocks; ++i) {
      if (total > opts_budget_cap / static_cast<uint64_t>(w_alphabet))
        throw BudgetExceeded("opts requires W^M evaluations, above opts_budget_cap");
      total *= static_cast<uint64_t>(w_alphabet);
    }
  }
}

std::vector<double> ExperimentConfig::grid() const {
  const int count =
      static_cast<int>(std::floor((grid_max_db - grid_min_db) / grid_step_db + 1e-9)) + 1;
  std::vector<double> g(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<size_t>(i)] = grid_min_db + i * grid_step_db;
  return g;
}

bool ExperimentConfig::has_method(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

namespace {

// Chunked symbol dispatch over a worker pool. Each worker owns accums[w];
// results must merge by commutative sums so the layout cannot matter.
template <class Accum, class PerSymbol>
std::vector<Accum> for_each_symbol(int64_t n_symbols, int workers_req,
                                   const ProgressFn& progress, Accum init,
                                   PerSymbol per_symbol) {
  int workers = workers_req > 0
                    ? workers_req
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<int64_t>(workers, n_symbols));
  const int64_t chunk =
      std::clamp<int64_t>(n_symbols / (static_cast<int64_t>(workers) * 16), 1, 512);

  std::vector<Accum> accums(static_cast<size_t>(workers), init);
  std::atomic<int64_t> next{0};
  std::atomic<int64_t> done{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto body = [&](int wi) {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const int64_t begin = next.fetch_add(chunk);
        if (begin >= n_symbols) break;
        const int64_t end = std::min(n_symbols, begin + chunk);
        for (int64_t s = begin; s < end; ++s) per_symbol(accums[static_cast<size_t>(wi)], s);
        const int64_t d = done.fetch_add(end - begin) + (end - begin);
        if (progress) {
          std::lock_guard<std::mutex> lock(mu);
          progress(d, n_symbols);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
      failed.store(true);
    }
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int wi = 0; wi < workers; ++wi) pool.emplace_back(body, wi);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return accums;
}

struct SymbolWork {
  FreqBlock block;
  Partition partition;
  SubblockSet set;
  PmceConfig pmce;
};

SymbolWork prepare_symbol(const ExperimentConfig& cfg, int64_t symbol) {
  SymbolWork w;
  Rng bits_rng(seed_stream(cfg.master_seed, static_cast<uint64_t>(symbol), SeedPurpose::bits));
  w.block = random_qpsk_block(bits_rng, cfg.n_subcarriers);
  w.partition = make_partition(cfg.n_subcarriers, cfg.m_subblocks, cfg.scheme,
                               seed_stream(cfg.master_seed, static_cast<uint64_t>(symbol),
                                           SeedPurpose::partition));
  w.set = split_and_transform(w.block, w.partition, cfg.oversampling);
  w.pmce = cfg.pmce;
  w.pmce.seed =
      seed_stream(cfg.master_seed, static_cast<uint64_t>(symbol), SeedPurpose::optimizer);
  return w;
}

OptResult dispatch(Method method, Objective& obj, const ExperimentConfig& cfg,
                   const PmceConfig& pcfg, std::vector<double>* trace) {
  switch (method) {
    case Method::none: {
      OptResult r;
      r.best_phase_idx.assign(static_cast<size_t>(obj.m()), 0);
      r.best_papr = obj.eval_mask(0);
      r.evaluations = 1;
      if (trace) trace->push_back(r.best_papr.db);
      return r;
    }
    case Method::opts:
      return opts_exhaustive(obj, cfg.w_alphabet, cfg.opts_budget_cap, trace);
    case Method::ipts:
      return ipts(obj, cfg.w_alphabet, trace);
    case Method::ce:
      return ce_optimize(obj, pcfg, trace);
    case Method::pmce:
      return pmce_optimize(obj, pcfg, trace);
  }
  throw std::logic_error("dispatch: unhandled method");
}

}  // namespace

CcdfResult run_ccdf(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const std::vector<double> grid = cfg.grid();
  const size_t n_grid = grid.size();
  const size_t n_methods = cfg.methods.size();

  struct Accum {
    // hist[m][k]: #symbols whose PAPR lies strictly above exactly k grid points
    std::vector<std::vector<uint64_t>> hist;
    std::vector<uint64_t> evals;
  };
  Accum init;
  init.hist.assign(n_methods, std::vector<uint64_t>(n_grid + 1, 0));
  init.evals.assign(n_methods, 0);

  auto accums = for_each_symbol(
      cfg.n_symbols, cfg.workers, progress, init, [&](Accum& acc, int64_t symbol) {
        SymbolWork w = prepare_symbol(cfg, symbol);
        Objective obj(w.set);
        for (size_t mi = 0; mi < n_methods; ++mi) {
          OptResult r = dispatch(cfg.methods[mi], obj, cfg, w.pmce, nullptr);
          const size_t k = static_cast<size_t>(
              std::lower_bound(grid.begin(), grid.end(), r.best_papr.db) - grid.begin());
          acc.hist[mi][k] += 1;
          acc.evals[mi] += r.evaluations;
        }
      });

  Accum total = init;
  for (const Accum& a : accums) {
    for (size_t mi = 0; mi < n_methods; ++mi) {
      total.evals[mi] += a.evals[mi];
      for (size_t k = 0; k <= n_grid; ++k) total.hist[mi][k] += a.hist[mi][k];
    }
  }

  CcdfResult res;
  res.config = cfg;
  res.curves.resize(n_methods);
  res.avg_evaluations.resize(n_methods);
  for (size_t mi = 0; mi < n_methods; ++mi) {
    CcdfCurve& c = res.curves[mi];
    c.method = cfg.methods[mi];
    c.grid_db = grid;
    c.n_symbols = cfg.n_symbols;
    c.exceed.assign(n_grid, 0);
    uint64_t suffix = 0;
    for (size_t i = n_grid; i-- > 0;) {
      suffix += total.hist[mi][i + 1];
      c.exceed[i] = suffix;
    }
    c.prob.resize(n_grid);
    for (size_t i = 0; i < n_grid; ++i)
      c.prob[i] = static_cast<double>(c.exceed[i]) / static_cast<double>(cfg.n_symbols);
    res.avg_evaluations[mi] =
        static_cast<double>(total.evals[mi]) / static_cast<double>(cfg.n_symbols);
  }
  return res;
}

SearchCountResult run_search_count(const ExperimentConfig& cfg,
                                   const std::vector<double>& thresholds_db,
                                   const ProgressFn& progress) {
  cfg.validate();
  if (thresholds_db.empty())
    throw std::invalid_argument("thresholds_db must not be empty");
  for (double t : thresholds_db)
    if (!std::isfinite(t)) throw std::invalid_argument("thresholds_db must be finite");

  std::vector<Method> methods;
  for (Method m : cfg.methods)
    if (m != Method::none) methods.push_back(m);
  if (methods.empty())
    throw std::invalid_argument("methods must include at least one search method");

  const size_t n_methods = methods.size();
  const size_t n_thresholds = thresholds_db.size();

  struct Accum {
    std::vector<std::vector<uint64_t>> counts;  // [threshold][method]
  };
  Accum init;
  init.counts.assign(n_thresholds, std::vector<uint64_t>(n_methods, 0));

  auto accums = for_each_symbol(
      cfg.n_symbols, cfg.workers, progress, init, [&](Accum& acc, int64_t symbol) {
        SymbolWork w = prepare_symbol(cfg, symbol);
        Objective obj(w.set);
        std::vector<double> trace;
        for (size_t mi = 0; mi < n_methods; ++mi) {
          trace.clear();
          OptResult r = dispatch(methods[mi], obj, cfg, w.pmce, &trace);
          assert(trace.size() == r.evaluations);
          (void)r;
          if (cfg.search_eval_budget > 0 && trace.size() > cfg.search_eval_budget)
            trace.resize(static_cast<size_t>(cfg.search_eval_budget));
          for (size_t ti = 0; ti < n_thresholds; ++ti) {
            // halt at the first candidate at or below T, else exhaust
            size_t count = trace.size();
            for (size_t e = 0; e < trace.size(); ++e) {
              if (trace[e] <= thresholds_db[ti]) {
                count = e + 1;
                break;
              }
            }
            acc.counts[ti][mi] += count;
          }
        }
      });

  Accum total = init;
  for (const Accum& a : accums)
    for (size_t ti = 0; ti < n_thresholds; ++ti)
      for (size_t mi = 0; mi < n_methods; ++mi) total.counts[ti][mi] += a.counts[ti][mi];

  SearchCountResult res;
  res.config = cfg;
  res.methods = methods;
  res.stats.resize(n_thresholds);
  for (size_t ti = 0; ti < n_thresholds; ++ti) {
    SearchStats& st = res.stats[ti];
    st.threshold_db = thresholds_db[ti];
    st.n_symbols = cfg.n_symbols;
    st.total_evaluations = total.counts[ti];
    st.avg_evaluations.resize(n_methods);
    for (size_t mi = 0; mi < n_methods; ++mi)
      st.avg_evaluations[mi] =
          static_cast<double>(total.counts[ti][mi]) / static_cast<double>(cfg.n_symbols);
  }
  return res;
}

SingleResult run_single(const ExperimentConfig& cfg, Method method) {
  cfg.validate();
  if ((method == Method::ce || method == Method::pmce) && cfg.w_alphabet != 2)
    throw std::invalid_argument("w_alphabet must be 2 for methods ce and pmce");

  SingleResult res;
  res.config = cfg;
  res.method = method;
  SymbolWork w = prepare_symbol(cfg, 0);
  res.partition = w.partition;
  Objective obj(w.set);
  res.baseline = obj.eval_mask(0);
  res.opt = dispatch(method, obj, cfg, w.pmce, &res.eval_db);
  return res;
}

double papr_at_ccdf(const CcdfCurve& curve, double target_prob) {
  if (curve.prob.empty()) throw std::invalid_argument("papr_at_ccdf: empty curve");
  if (!(target_prob > 0.0 && target_prob < 1.0))
    throw std::invalid_argument("papr_at_ccdf: target_prob must be in (0, 1)");

  size_t i = 0;
  while (i < curve.prob.size() && curve.prob[i] > target_prob) ++i;
  if (i == curve.prob.size())
    throw std::out_of_range("papr_at_ccdf: curve does not reach the target probability");
  if (i == 0) return curve.grid_db.front();

  const double g0 = curve.grid_db[i - 1], g1 = curve.grid_db[i];
  const double p0 = curve.prob[i - 1], p1 = curve.prob[i];
  if (p1 <= 0.0) {
    // last step falls to zero: interpolate linearly in probability
    return g0 + (g1 - g0) * (p0 - target_prob) / (p0 - p1);
  }
  const double l0 = std::log10(p0), l1 = std::log10(p1), lt = std::log10(target_prob);
  if (l0 == l1) return g1;
  return g0 + (g1 - g0) * (l0 - lt) / (l0 - l1);
}

}  // namespace paprsim
