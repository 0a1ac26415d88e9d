#include "paprsim/evaluator.hpp"

namespace paprsim {

namespace {

// Signed accumulation of one sub-block, the exact same arithmetic as the
// combine() hot path.
void add_signed(cxd* acc, const cxd* part, int len, bool negate) {
  if (negate) {
    for (int i = 0; i < len; ++i) acc[i] -= part[i];
  } else {
    for (int i = 0; i < len; ++i) acc[i] += part[i];
  }
}

}  // namespace

Objective::Objective(const SubblockSet& set)
    : set_(&set),
      m_(set.m()),
      hlo_(set.m() / 2),
      len_(set.n_samples()),
      use_halves_(set.m() >= 2 && set.m() <= 16),
      use_memo_(set.m() <= 20) {
  if (m_ < 1) throw std::invalid_argument("Objective: empty sub-block set");
  if (m_ > 62) throw std::invalid_argument("Objective: more than 62 sub-blocks");
  if (use_halves_) {
    lo_.resize(size_t(1) << hlo_);
    hi_.resize(size_t(1) << (m_ - hlo_));
    lo_built_.assign(lo_.size(), 0);
    hi_built_.assign(hi_.size(), 0);
  }
  if (use_memo_) {
    memo_ratio_.resize(size_t(1) << m_);
    memo_set_.assign(memo_ratio_.size(), 0);
  }
  scratch_.resize(static_cast<size_t>(len_));
}

const cxd* Objective::half(bool hi, uint64_t mask) {
  auto& table = hi ? hi_ : lo_;
  auto& built = hi ? hi_built_ : lo_built_;
  const int first = hi ? hlo_ : 0;
  const int count = hi ? m_ - hlo_ : hlo_;
  if (!built[mask]) {
    auto& entry = table[mask];
    entry.assign(static_cast<size_t>(len_), cxd(0.0, 0.0));
    for (int k = 0; k < count; ++k)
      add_signed(entry.data(), set_->time_parts[first + k].samples.data(), len_,
                 ((mask >> k) & 1u) != 0);
    built[mask] = 1;
  }
  return table[mask].data();
}

PaprValue Objective::eval_mask(uint64_t c_mask) {
  if (c_mask >> m_)
    throw std::invalid_argument("Objective::eval_mask: mask has bits beyond M");
  if (use_memo_ && memo_set_[c_mask])
    return PaprValue::from_ratio(memo_ratio_[c_mask]);

  double peak = 0.0;
  double sum = 0.0;
  if (use_halves_) {
    const cxd* lo = half(false, c_mask & ((uint64_t(1) << hlo_) - 1));
    const cxd* hi = half(true, c_mask >> hlo_);
    for (int i = 0; i < len_; ++i) {
      double re = lo[i].real() + hi[i].real();
      double im = lo[i].imag() + hi[i].imag();
      double p = re * re + im * im;
      sum += p;
      if (p > peak) peak = p;
    }
  } else {
    std::fill(scratch_.begin(), scratch_.end(), cxd(0.0, 0.0));
    for (int k = 0; k < m_; ++k)
      add_signed(scratch_.data(), set_->time_parts[k].samples.data(), len_,
                 ((c_mask >> k) & 1u) != 0);
    for (int i = 0; i < len_; ++i) {
      double p = scratch_[i].real() * scratch_[i].real() +
                 scratch_[i].imag() * scratch_[i].imag();
      sum += p;
      if (p > peak) peak = p;
    }
  }
  if (sum <= 0.0)
    throw std::domain_error("Objective::eval_mask: combined signal has zero power");
  double ratio = peak / (sum / static_cast<double>(len_));
  if (use_memo_) {
    memo_ratio_[c_mask] = ratio;
    memo_set_[c_mask] = 1;
  }
  return PaprValue::from_ratio(ratio);
}

PaprValue Objective::eval_phases(std::span<const int> phase_idx, int w) {
  if (static_cast<int>(phase_idx.size()) != m_)
    throw std::invalid_argument("Objective::eval_phases: index count does not match M");
  if (w != alphabet_w_) {
    alphabet_ = phase_alphabet(w);
    alphabet_w_ = w;
  }
  const std::vector<cxd>& alphabet = alphabet_;
  std::fill(scratch_.begin(), scratch_.end(), cxd(0.0, 0.0));
  for (int k = 0; k < m_; ++k) {
    int l = phase_idx[k];
    if (l < 0 || l >= w)
      throw std::invalid_argument("Objective::eval_phases: index out of alphabet");
    const cxd f = alphabet[l];
    const cxd* part = set_->time_parts[k].samples.data();
    if (f.imag() == 0.0 && (f.real() == 1.0 || f.real() == -1.0)) {
      add_signed(scratch_.data(), part, len_, f.real() < 0.0);
    } else {
      for (int i = 0; i < len_; ++i) scratch_[i] += f * part[i];
    }
  }
  double peak = 0.0;
  double sum = 0.0;
  for (int i = 0; i < len_; ++i) {
    double p = scratch_[i].real() * scratch_[i].real() +
               scratch_[i].imag() * scratch_[i].imag();
    sum += p;
    if (p > peak) peak = p;
  }
  if (sum <= 0.0)
    throw std::domain_error("Objective::eval_phases: combined signal has zero power");
  return PaprValue::from_ratio(peak / (sum / static_cast<double>(len_)));
}

}  // namespace paprsim
