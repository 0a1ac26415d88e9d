#pragma once

#include <cstdint>
#include <span>

#include "paprsim/pts.hpp"

namespace paprsim {

/// Memoized PAPR objective over binary (W=2) phase vectors for one
/// SubblockSet. Candidates are evaluated through a canonical half-combination
/// scheme: the sub-blocks are split in two halves, each half's signed sum is
/// cached per sign pattern, and a candidate costs one fused peak/mean pass
/// over lo + hi. The value of eval_mask(c) is a pure function of
/// (SubblockSet, c) — independent of memoization or call order — and agrees
/// with objective(set, c) to within ~1e-15 relative.
///
/// Not thread safe; use one instance per worker.
class Objective {
 public:
  explicit Objective(const SubblockSet& set);

  /// F(c) for the binary candidate with bit i = c_i. W = 2 only.
  PaprValue eval_mask(uint64_t c_mask);

  PaprValue eval_bits(const BinaryVector& c) { return eval_mask(c.to_mask()); }

  /// General-alphabet evaluation for phase-index vectors; unmemoized.
  PaprValue eval_phases(std::span<const int> phase_idx, int w);

  int m() const { return m_; }
  int n_samples() const { return len_; }
  const SubblockSet& set() const { return *set_; }

 private:
  const cxd* half(bool hi, uint64_t mask);

  const SubblockSet* set_;
  int m_;
  int hlo_;  // lo half covers sub-blocks [0, hlo_), hi half the rest
  int len_;
  bool use_halves_;
  bool use_memo_;
  std::vector<std::vector<cxd>> lo_, hi_;
  std::vector<uint8_t> lo_built_, hi_built_;
  std::vector<double> memo_ratio_;
  std::vector<uint8_t> memo_set_;
  std::vector<cxd> scratch_;
  std::vector<cxd> alphabet_;
  int alphabet_w_ = 0;
};

}  // namespace paprsim
