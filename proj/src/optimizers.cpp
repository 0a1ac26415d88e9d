#include "paprsim/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "paprsim/rng.hpp"

namespace paprsim {

namespace {

constexpr double kLambdaMax = 1e6;
// an order tighter than the 1e-8 contract so that lambda itself, not just the
// weighted mean, lands within 1e-8 of the root on well-conditioned instances
constexpr double kLambdaTol = 1e-10;

// Lexicographic order on c vectors (c_0 most significant) as an integer key.
uint64_t lex_key(uint64_t mask, int m) {
  uint64_t key = 0;
  for (int i = 0; i < m; ++i) key = (key << 1) | ((mask >> i) & 1u);
  return key;
}

int elite_count(double rho, int j) {
  // tiny guard so that products like 0.07*100 do not ceil one past the intent
  return static_cast<int>(std::ceil(rho * j - 1e-9));
}

uint64_t checked_pow(int w, int m, uint64_t cap) {
  uint64_t total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > cap / static_cast<uint64_t>(w))
      throw BudgetExceeded("opts_exhaustive: W^M exceeds the evaluation budget cap");
    total *= static_cast<uint64_t>(w);
  }
  return total;
}

// One softmax-weighted refit over sample masks; the single arithmetic path
// behind update_p.
std::vector<double> update_p_masks(const std::vector<uint64_t>& masks,
                                   std::span<const double> f_values, double lambda,
                                   int m) {
  if (masks.size() != f_values.size() || masks.empty())
    throw std::invalid_argument("update_p: samples and F values must match and be nonempty");
  if (!std::isfinite(lambda))
    throw std::invalid_argument("update_p: lambda must be finite");
  double shift = lambda >= 0.0 ? *std::min_element(f_values.begin(), f_values.end())
                               : *std::max_element(f_values.begin(), f_values.end());
  std::vector<double> acc(static_cast<size_t>(m), 0.0);
  double wsum = 0.0;
  for (size_t k = 0; k < masks.size(); ++k) {
    double w = std::exp(-(f_values[k] - shift) * lambda);
    wsum += w;
    for (int i = 0; i < m; ++i)
      if ((masks[k] >> i) & 1u) acc[i] += w;
  }
  for (int i = 0; i < m; ++i) acc[i] /= wsum;
  return acc;
}

}  // namespace

BinaryVector OptResult::best_binary() const {
  BinaryVector c;
  c.bits.resize(best_phase_idx.size());
  for (size_t i = 0; i < best_phase_idx.size(); ++i) {
    if (best_phase_idx[i] < 0 || best_phase_idx[i] > 1)
      throw std::logic_error("OptResult::best_binary: result is not binary (W != 2)");
    c.bits[i] = static_cast<uint8_t>(best_phase_idx[i]);
  }
  return c;
}

double elite_gamma(std::span<const double> f_values, double rho) {
  const int j = static_cast<int>(f_values.size());
  if (j < 1) throw std::invalid_argument("elite_gamma: empty F values");
  int q = elite_count(rho, j);
  if (q < 1 || q > j)
    throw std::invalid_argument("elite_gamma: ceil(rho*J) must lie in [1, J]");
  std::vector<double> sorted(f_values.begin(), f_values.end());
  std::partial_sort(sorted.begin(), sorted.begin() + q, sorted.end());
  double sum = 0.0;
  for (int i = 0; i < q; ++i) sum += sorted[i];
  return sum / q;
}

double solve_lambda(std::span<const double> f_values, double gamma) {
  if (f_values.empty()) throw std::invalid_argument("solve_lambda: empty F values");
  double fmin = f_values[0], fsum = 0.0;
  for (double f : f_values) {
    fmin = std::min(fmin, f);
    fsum += f;
  }
  const double fmean = fsum / static_cast<double>(f_values.size());
  if (gamma < fmin - 1e-9 || gamma > fmean + 1e-9)
    throw std::invalid_argument("solve_lambda: gamma outside [min(F), mean(F)]");

  // weighted mean of F under weights exp(-(F - fmin) * lambda)
  auto g = [&](double lambda) {
    double wsum = 0.0, fwsum = 0.0;
    for (double f : f_values) {
      double w = std::exp(-(f - fmin) * lambda);
      wsum += w;
      fwsum += f * w;
    }
    return fwsum / wsum;
  };

  if (gamma >= fmean) return 0.0;  // g(0) = mean(F); also the all-equal case
  if (gamma - fmin <= 1e-12) return kLambdaMax;

  double lo = 0.0, hi = 1.0;
  while (g(hi) > gamma) {
    lo = hi;
    hi *= 2.0;
    if (hi >= kLambdaMax) {
      hi = kLambdaMax;
      if (g(hi) > gamma) return kLambdaMax;
      break;
    }
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (std::abs(gm - gamma) <= kLambdaTol) return mid;
    if (gm > gamma)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BernoulliParams update_p(const std::vector<BinaryVector>& samples,
                         std::span<const double> f_values, double lambda) {
  if (samples.empty())
    throw std::invalid_argument("update_p: no samples");
  const int m = samples[0].size();
  std::vector<uint64_t> masks(samples.size());
  for (size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].size() != m)
      throw std::invalid_argument("update_p: inconsistent sample lengths");
    masks[k] = samples[k].to_mask();
  }
  return BernoulliParams{update_p_masks(masks, f_values, lambda, m)};
}

BernoulliParams smooth(const BernoulliParams& p_new, const BernoulliParams& p_old,
                       double alpha) {
  if (p_new.p.size() != p_old.p.size())
    throw std::invalid_argument("smooth: parameter lengths differ");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("smooth: alpha must be in (0, 1]");
  BernoulliParams out;
  out.p.resize(p_new.p.size());
  for (size_t i = 0; i < out.p.size(); ++i)
    out.p[i] = alpha * p_new.p[i] + (1.0 - alpha) * p_old.p[i];
  return out;
}

OptResult opts_exhaustive(Objective& obj, int w, uint64_t budget_cap,
                          std::vector<double>* eval_trace_db) {
  if (w < 1) throw std::invalid_argument("opts_exhaustive: W must be >= 1");
  const int m = obj.m();
  const uint64_t total = checked_pow(w, m, budget_cap);

  OptResult res;
  res.iterations = 1;
  res.evaluations = total;
  double best_ratio = std::numeric_limits<double>::infinity();
  PaprValue best_value;

  if (w == 2) {
    uint64_t best_mask = 0;
    for (uint64_t i = 0; i < total; ++i) {
      // lexicographic candidate order: sub-block 0 is the most
      // significant digit of i
      uint64_t mask = 0;
      for (int k = 0; k < m; ++k)
        mask |= ((i >> (m - 1 - k)) & 1u) << k;
      PaprValue v = obj.eval_mask(mask);
      if (eval_trace_db) eval_trace_db->push_back(v.db);
      if (v.ratio < best_ratio) {
        best_ratio = v.ratio;
        best_value = v;
        best_mask = mask;
      }
    }
    res.best_phase_idx.resize(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k)
      res.best_phase_idx[k] = static_cast<int>((best_mask >> k) & 1u);
  } else {
    std::vector<int> idx(static_cast<size_t>(m), 0);
    std::vector<int> best_idx = idx;
    for (uint64_t i = 0;; ++i) {
      PaprValue v = obj.eval_phases(idx, w);
      if (eval_trace_db) eval_trace_db->push_back(v.db);
      if (v.ratio < best_ratio) {
        best_ratio = v.ratio;
        best_value = v;
        best_idx = idx;
      }
      // odometer increment, last coordinate fastest
      int k = m - 1;
      while (k >= 0 && ++idx[k] == w) idx[k--] = 0;
      if (k < 0) break;
    }
    res.best_phase_idx = best_idx;
  }
  res.best_papr = best_value;
  return res;
}

OptResult opts_exhaustive(const SubblockSet& set, int w, uint64_t budget_cap) {
  Objective obj(set);
  return opts_exhaustive(obj, w, budget_cap);
}

OptResult ipts(Objective& obj, int w, std::vector<double>* eval_trace_db) {
  if (w < 1) throw std::invalid_argument("ipts: W must be >= 1");
  const int m = obj.m();
  if (m < 2) throw std::invalid_argument("ipts: need at least two sub-blocks");

  std::vector<int> idx(static_cast<size_t>(m), 0);
  OptResult res;
  double best_ratio = std::numeric_limits<double>::infinity();
  PaprValue best_value;

  for (int k = 1; k < m; ++k) {
    int best_l = 0;
    double coord_best = std::numeric_limits<double>::infinity();
    for (int l = 0; l < w; ++l) {
      idx[k] = l;
      PaprValue v;
      if (w == 2) {
        uint64_t mask = 0;
        for (int i = 0; i < m; ++i) mask |= uint64_t(idx[i]) << i;
        v = obj.eval_mask(mask);
      } else {
        v = obj.eval_phases(idx, w);
      }
      if (eval_trace_db) eval_trace_db->push_back(v.db);
      ++res.evaluations;
      if (v.ratio < coord_best) {
        coord_best = v.ratio;
        best_l = l;
        if (v.ratio < best_ratio) {
          best_ratio = v.ratio;
          best_value = v;
        }
      }
    }
    idx[k] = best_l;
  }
  res.best_phase_idx = idx;
  res.best_papr = best_value;
  res.iterations = m - 1;
  return res;
}

OptResult ipts(const SubblockSet& set, int w) {
  Objective obj(set);
  return ipts(obj, w);
}

namespace {

// Shared CE / PMCE loop; `softmax` selects the PMCE update.
OptResult stochastic_optimize(Objective& obj, const PmceConfig& cfg, bool softmax,
                              std::vector<double>* eval_trace_db) {
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0))
    throw std::invalid_argument("rho must be in (0, 1)");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    throw std::invalid_argument("alpha must be in (0, 1]");
  if (cfg.samples_j < 1) throw std::invalid_argument("samples_j must be >= 1");
  if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(cfg.convergence_eps > 0.0))
    throw std::invalid_argument("convergence_eps must be > 0");

  const int m = obj.m();
  const int j_samples = cfg.samples_j;
  Rng rng(cfg.seed);

  BernoulliParams p_hat{std::vector<double>(static_cast<size_t>(m), 0.5)};
  double best_ratio = std::numeric_limits<double>::infinity();
  uint64_t best_mask = 0;
  PaprValue best_value;
  std::unordered_set<uint64_t> sampled;

  OptResult res;
  std::vector<uint64_t> masks(static_cast<size_t>(j_samples));
  std::vector<double> f(static_cast<size_t>(j_samples));

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    // draw all J candidates first (c bits in ascending coordinate order),
    // then evaluate
    for (int k = 0; k < j_samples; ++k) {
      uint64_t mask = 0;
      for (int i = 0; i < m; ++i)
        if (rng.bernoulli(p_hat.p[i])) mask |= uint64_t(1) << i;
      masks[k] = mask;
    }
    for (int k = 0; k < j_samples; ++k) {
      PaprValue v = obj.eval_mask(masks[k]);
      f[k] = v.ratio;
      if (eval_trace_db) eval_trace_db->push_back(v.db);
      sampled.insert(masks[k]);
      if (v.ratio < best_ratio ||
          (v.ratio == best_ratio && lex_key(masks[k], m) < lex_key(best_mask, m))) {
        best_ratio = v.ratio;
        best_value = v;
        best_mask = masks[k];
      }
    }
    res.evaluations += static_cast<uint64_t>(j_samples);

    double gamma, lambda = 0.0;
    std::vector<double> p_new;
    if (softmax) {
      gamma = elite_gamma(f, cfg.rho);
      lambda = solve_lambda(f, gamma);
      p_new = update_p_masks(masks, f, lambda, m);
    } else {
      // elite threshold: the ceil(rho*J)-th smallest F
      std::vector<double> sorted(f.begin(), f.end());
      int q = elite_count(cfg.rho, j_samples);
      std::partial_sort(sorted.begin(), sorted.begin() + q, sorted.end());
      gamma = sorted[q - 1];
      p_new.assign(static_cast<size_t>(m), 0.0);
      int elite = 0;
      for (int k = 0; k < j_samples; ++k) {
        if (f[k] <= gamma) {
          ++elite;
          for (int i = 0; i < m; ++i)
            if ((masks[k] >> i) & 1u) p_new[i] += 1.0;
        }
      }
      for (int i = 0; i < m; ++i) p_new[i] /= elite;
    }

    p_hat = smooth(BernoulliParams{p_new}, p_hat, cfg.alpha);
    res.trace.push_back({gamma, lambda, p_hat.p});
    res.iterations = iter;

    bool converged = true;
    for (double p : p_hat.p)
      if (p > cfg.convergence_eps && p < 1.0 - cfg.convergence_eps) {
        converged = false;
        break;
      }
    if (converged) break;
  }

  if (softmax) {
    // candidate implied by the converged distribution, entries >= 0.5 -> 1
    uint64_t rounded = 0;
    for (int i = 0; i < m; ++i)
      if (p_hat.p[i] >= 0.5) rounded |= uint64_t(1) << i;
    PaprValue v = obj.eval_mask(rounded);
    if (!sampled.contains(rounded)) {
      res.evaluations += 1;
      if (eval_trace_db) eval_trace_db->push_back(v.db);
    }
    if (v.ratio < best_ratio ||
        (v.ratio == best_ratio && lex_key(rounded, m) < lex_key(best_mask, m))) {
      best_ratio = v.ratio;
      best_value = v;
      best_mask = rounded;
    }
  }

  res.best_phase_idx.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    res.best_phase_idx[i] = static_cast<int>((best_mask >> i) & 1u);
  res.best_papr = best_value;
  return res;
}

}  // namespace

OptResult ce_optimize(Objective& obj, const PmceConfig& cfg,
                      std::vector<double>* eval_trace_db) {
  return stochastic_optimize(obj, cfg, false, eval_trace_db);
}

OptResult ce_optimize(const SubblockSet& set, const PmceConfig& cfg) {
  Objective obj(set);
  return ce_optimize(obj, cfg);
}

OptResult pmce_optimize(Objective& obj, const PmceConfig& cfg,
                        std::vector<double>* eval_trace_db) {
  return stochastic_optimize(obj, cfg, true, eval_trace_db);
}

OptResult pmce_optimize(const SubblockSet& set, const PmceConfig& cfg) {
  Objective obj(set);
  return pmce_optimize(obj, cfg);
}

}  // namespace paprsim
