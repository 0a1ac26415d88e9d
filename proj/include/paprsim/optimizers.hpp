#pragma once

#include <cstdint>
#include <span>

#include "paprsim/evaluator.hpp"
#include "paprsim/pts.hpp"

namespace paprsim {

/// Bernoulli sampling parameters: P(c_i = 1) = p[i].
struct BernoulliParams {
  std::vector<double> p;
};

/// Configuration shared by the stochastic optimizers (CE and PMCE).
struct PmceConfig {
  double rho = 0.1;             // rarity parameter, elite fraction
  double alpha = 0.6;           // smoothing parameter
  int samples_j = 40;           // samples per iteration
  int max_iterations = 50;
  double convergence_eps = 1e-3;  // distance of every p to {0,1} at which to stop
  uint64_t seed = 0;
};

struct IterationRecord {
  double gamma = 0.0;
  double lambda = 0.0;
  std::vector<double> p_hat;
};

struct OptResult {
  std::vector<int> best_phase_idx;  // per sub-block index into the W alphabet
  PaprValue best_papr;
  uint64_t evaluations = 0;  // candidate phase vectors whose PAPR was computed
  int iterations = 0;
  std::vector<IterationRecord> trace;

  /// Binary view, valid when every index is 0 or 1 (W = 2): c = index.
  BinaryVector best_binary() const;
};

/// Mean of the ceil(rho*J) smallest values of f_values.
double elite_gamma(std::span<const double> f_values, double rho);

/// Solves sum_k F_k*exp(-F_k*lambda) / sum_k exp(-F_k*lambda) = gamma for
/// lambda >= 0 by bracketed bisection, to 1e-8 absolute on the weighted mean.
/// The weighted mean decreases from mean(F) at lambda=0 toward min(F), so the
/// root is unique; exponentials are computed relative to min(F) to avoid
/// underflow. Requires min(F) <= gamma <= mean(F) (1e-9 slack); gamma within
/// 1e-12 of min(F) returns the 1e6 cap.
double solve_lambda(std::span<const double> f_values, double gamma);

/// Softmax-weighted per-coordinate update:
/// p_i = sum_k I{c_k,i = 1} w_k / sum_k w_k with w_k = exp(-F_k*lambda).
BernoulliParams update_p(const std::vector<BinaryVector>& samples,
                         std::span<const double> f_values, double lambda);

/// Element-wise alpha*p_new + (1-alpha)*p_old. Requires alpha in (0, 1].
BernoulliParams smooth(const BernoulliParams& p_new, const BernoulliParams& p_old,
                       double alpha);

/// Exhaustive search over all W^M phase-index vectors in lexicographic order
/// (first sub-block most significant). Ties keep the lexicographically
/// smallest vector. Throws BudgetExceeded when W^M > budget_cap.
/// When eval_trace_db is given, every evaluated candidate's PAPR (dB) is
/// appended in evaluation order.
OptResult opts_exhaustive(Objective& obj, int w, uint64_t budget_cap = uint64_t(1) << 20,
                          std::vector<double>* eval_trace_db = nullptr);
OptResult opts_exhaustive(const SubblockSet& set, int w,
                          uint64_t budget_cap = uint64_t(1) << 20);

/// Iterative flipping: the first factor fixed to index 0; each remaining
/// coordinate in order tries all W alphabet values (others held) and keeps the
/// argmin, lowest index on ties. Exactly (M-1)*W evaluations. Requires M >= 2.
OptResult ipts(Objective& obj, int w, std::vector<double>* eval_trace_db = nullptr);
OptResult ipts(const SubblockSet& set, int w);

/// Standard cross-entropy baseline (W = 2): per iteration the elite threshold
/// is the ceil(rho*J)-th smallest F and p is refit on the indicator-selected
/// elite samples, then smoothed. Returns the best candidate ever sampled;
/// evaluations = J * iterations.
OptResult ce_optimize(Objective& obj, const PmceConfig& cfg,
                      std::vector<double>* eval_trace_db = nullptr);
OptResult ce_optimize(const SubblockSet& set, const PmceConfig& cfg);

/// Parametric minimum cross-entropy search (W = 2):
///   1. p_hat = [0.5, ...]
///   2. sample J candidates from the Bernoulli law, evaluate F
///   3. gamma = mean of the ceil(rho*J) smallest F; solve for lambda
///   4. refit p with softmax weights exp(-F*lambda) over all samples
///   5. smooth: p_hat = alpha*p + (1-alpha)*p_hat
///   6. stop when every p_hat entry is within convergence_eps of 0 or 1, or
///      at max_iterations
/// Returns the better of the best-ever sample and the rounded p_hat
/// candidate; evaluations = J * iterations, plus 1 if the rounded candidate
/// was never sampled.
OptResult pmce_optimize(Objective& obj, const PmceConfig& cfg,
                        std::vector<double>* eval_trace_db = nullptr);
OptResult pmce_optimize(const SubblockSet& set, const PmceConfig& cfg);

}  // namespace paprsim
