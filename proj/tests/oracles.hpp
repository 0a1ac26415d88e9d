#pragma once

// Independent reference implementations used as oracles by the test suite.
// Everything here is computed straight from the definitions (direct DFT sum,
// per-candidate signal combination, full enumeration) and deliberately shares
// no code path with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "paprsim/pts.hpp"

namespace oracle {

using paprsim::cxd;

inline const double kPi = std::acos(-1.0);

// x(k) = (1/sqrt(N)) * sum_n X_n exp(j*2*pi*n*k / (L*N)), k = 0..L*N-1
inline std::vector<cxd> idft(const std::vector<cxd>& symbols, int oversampling) {
  const size_t n = symbols.size();
  const size_t len = n * static_cast<size_t>(oversampling);
  std::vector<cxd> out(len, cxd(0.0, 0.0));
  for (size_t k = 0; k < len; ++k) {
    cxd acc(0.0, 0.0);
    for (size_t i = 0; i < n; ++i) {
      const double angle = 2.0 * kPi * static_cast<double>(i) * static_cast<double>(k) /
                           static_cast<double>(len);
      acc += symbols[i] * cxd(std::cos(angle), std::sin(angle));
    }
    out[k] = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

inline double papr_ratio(const std::vector<cxd>& samples) {
  double peak = 0.0, total = 0.0;
  for (const cxd& z : samples) {
    const double p = std::norm(z);
    peak = std::max(peak, p);
    total += p;
  }
  return peak / (total / static_cast<double>(samples.size()));
}

inline cxd phase_factor(int l, int w) {
  const double angle = 2.0 * kPi * static_cast<double>(l) / static_cast<double>(w);
  return cxd(std::cos(angle), std::sin(angle));
}

// weighted recombination of precomputed sub-block signals
inline std::vector<cxd> combine(const paprsim::SubblockSet& set,
                                const std::vector<int>& phase_idx, int w) {
  const size_t len = static_cast<size_t>(set.n_samples());
  std::vector<cxd> out(len, cxd(0.0, 0.0));
  for (size_t m = 0; m < phase_idx.size(); ++m) {
    const cxd f = phase_factor(phase_idx[m], w);
    for (size_t k = 0; k < len; ++k) out[k] += f * set.time_parts[m].samples[k];
  }
  return out;
}

struct BruteForce {
  std::vector<double> ratios;  // per candidate, lexicographic order
  std::vector<int> best_idx;
  double best_ratio = 0.0;
};

// full enumeration over all W^M candidates, first sub-block most significant
inline BruteForce brute_force(const paprsim::SubblockSet& set, int w) {
  const int m = set.m();
  uint64_t total = 1;
  for (int i = 0; i < m; ++i) total *= static_cast<uint64_t>(w);

  BruteForce res;
  res.best_ratio = std::numeric_limits<double>::infinity();
  res.ratios.reserve(total);
  std::vector<int> idx(static_cast<size_t>(m));
  for (uint64_t ordinal = 0; ordinal < total; ++ordinal) {
    uint64_t rest = ordinal;
    for (int k = m - 1; k >= 0; --k) {
      idx[static_cast<size_t>(k)] = static_cast<int>(rest % static_cast<uint64_t>(w));
      rest /= static_cast<uint64_t>(w);
    }
    const double ratio = papr_ratio(combine(set, idx, w));
    res.ratios.push_back(ratio);
    if (ratio < res.best_ratio) {
      res.best_ratio = ratio;
      res.best_idx = idx;
    }
  }
  return res;
}

// g(lambda) from the defining expression. Numerator and denominator are both
// multiplied by exp(min(F)*lambda), which cancels exactly but keeps the
// exponentials representable for large lambda.
inline double weighted_mean(const std::vector<double>& f_values, double lambda) {
  double fmin = f_values[0];
  for (double f : f_values) fmin = std::min(fmin, f);
  double wsum = 0.0, fwsum = 0.0;
  for (double f : f_values) {
    const double wk = std::exp((fmin - f) * lambda);
    wsum += wk;
    fwsum += f * wk;
  }
  return fwsum / wsum;
}

}  // namespace oracle
