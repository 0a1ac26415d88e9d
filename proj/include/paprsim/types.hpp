#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace paprsim {

using cxd = std::complex<double>;

/// Thrown when an exhaustive search would exceed its configured candidate budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One OFDM block in the frequency domain: a vector of constellation symbols,
/// one per subcarrier.
struct FreqBlock {
  std::vector<cxd> symbols;

  int size() const { return static_cast<int>(symbols.size()); }
};

/// Discrete-time baseband signal sampled at `oversampling` times the Nyquist
/// rate, so a block of N subcarriers yields oversampling*N samples.
struct TimeSignal {
  std::vector<cxd> samples;
  int oversampling = 1;

  int size() const { return static_cast<int>(samples.size()); }
};

/// Peak-to-average power ratio, kept both as a linear ratio and in dB.
struct PaprValue {
  double ratio = 1.0;
  double db = 0.0;

  static PaprValue from_ratio(double r) { return {r, 10.0 * std::log10(r)}; }
};

}  // namespace paprsim
