#pragma once

#include <span>

#include "paprsim/rng.hpp"
#include "paprsim/types.hpp"

namespace paprsim {

/// Maps 2N bits onto N Gray-coded QPSK symbols of unit magnitude.
/// Pair (b0, b1) -> ((1-2*b1) + j(1-2*b0)) / sqrt(2), i.e.
/// 00 -> (+1+j)/sqrt(2), 01 -> (-1+j)/sqrt(2),
/// 11 -> (-1-j)/sqrt(2), 10 -> (+1-j)/sqrt(2).
/// Throws std::invalid_argument on an odd bit count or non-binary values.
FreqBlock modulate_qpsk(std::span<const uint8_t> bits);

/// Length-(L*N) inverse DFT of the block padded with (L-1)*N trailing zeros,
/// scaled by 1/sqrt(N):
///   x(k) = (1/sqrt(N)) * sum_n X_n * exp(j*2*pi*n*k / (L*N)).
/// The 1/sqrt(N) scaling keeps average power independent of L.
TimeSignal idft_oversampled(const FreqBlock& block, int oversampling);

/// Peak instantaneous power over the per-symbol time-average power.
/// Throws std::domain_error for an all-zero or empty signal.
PaprValue papr(const TimeSignal& signal);

/// Draws 2N random bits from `rng` and modulates them.
FreqBlock random_qpsk_block(Rng& rng, int n_subcarriers);

}  // namespace paprsim
