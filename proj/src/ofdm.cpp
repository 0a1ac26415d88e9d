#include "paprsim/ofdm.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>

namespace paprsim {

namespace {

// FFTW planning is not thread safe; executing distinct buffers is. Plans are
// created once per transform size with FFTW_UNALIGNED so they can run on any
// caller-owned buffer via fftw_execute_dft.
class PlanCache {
 public:
  fftw_plan get(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cxd> in(static_cast<size_t>(n));
    std::vector<cxd> out(static_cast<size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<int, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

FreqBlock modulate_qpsk(std::span<const uint8_t> bits) {
  if (bits.size() % 2 != 0)
    throw std::invalid_argument("modulate_qpsk: bit count must be even (2 per symbol)");
  FreqBlock block;
  block.symbols.resize(bits.size() / 2);
  for (size_t i = 0; i < block.symbols.size(); ++i) {
    uint8_t b0 = bits[2 * i];
    uint8_t b1 = bits[2 * i + 1];
    if (b0 > 1 || b1 > 1)
      throw std::invalid_argument("modulate_qpsk: bits must be 0 or 1");
    block.symbols[i] = cxd((1.0 - 2.0 * b1) * kInvSqrt2, (1.0 - 2.0 * b0) * kInvSqrt2);
  }
  return block;
}

TimeSignal idft_oversampled(const FreqBlock& block, int oversampling) {
  int n = block.size();
  if (n < 1) throw std::invalid_argument("idft_oversampled: empty block");
  if (oversampling < 1)
    throw std::invalid_argument("idft_oversampled: oversampling must be >= 1");
  int total = oversampling * n;

  std::vector<cxd> in(static_cast<size_t>(total), cxd(0.0, 0.0));
  std::copy(block.symbols.begin(), block.symbols.end(), in.begin());

  TimeSignal out;
  out.oversampling = oversampling;
  out.samples.resize(static_cast<size_t>(total));
  fftw_execute_dft(plan_cache().get(total),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.samples.data()));

  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& s : out.samples) s *= scale;
  return out;
}

PaprValue papr(const TimeSignal& signal) {
  if (signal.samples.empty()) throw std::domain_error("papr: empty signal");
  double peak = 0.0;
  double sum = 0.0;
  for (const cxd& s : signal.samples) {
    double p = s.real() * s.real() + s.imag() * s.imag();
    sum += p;
    if (p > peak) peak = p;
  }
  if (sum <= 0.0) throw std::domain_error("papr: signal has zero average power");
  double mean = sum / static_cast<double>(signal.samples.size());
  return PaprValue::from_ratio(peak / mean);
}

FreqBlock random_qpsk_block(Rng& rng, int n_subcarriers) {
  if (n_subcarriers < 1)
    throw std::invalid_argument("random_qpsk_block: need at least one subcarrier");
  std::vector<uint8_t> b;
  rng.bits(b, static_cast<size_t>(2 * n_subcarriers));
  return modulate_qpsk(b);
}

}  // namespace paprsim
