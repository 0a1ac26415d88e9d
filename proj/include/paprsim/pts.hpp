#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "paprsim/ofdm.hpp"
#include "paprsim/types.hpp"

namespace paprsim {

enum class PartitionScheme { random, adjacent, interleaved };

const char* scheme_name(PartitionScheme s);
PartitionScheme scheme_from_name(const std::string& name);

/// Disjoint cover of the N subcarriers by M sub-blocks.
struct Partition {
  std::vector<int> assignment;  // subcarrier index -> sub-block index
  int m_subblocks = 1;
  PartitionScheme scheme = PartitionScheme::random;
  uint64_t seed = 0;

  int size() const { return static_cast<int>(assignment.size()); }
};

/// The M frequency-domain sub-blocks of one OFDM block, each kept full-length
/// with non-member subcarriers zeroed, plus their precomputed oversampled
/// time-domain signals. Immutable after construction; combining candidates is
/// then a pure multiply-accumulate over time_parts with no further transforms.
struct SubblockSet {
  std::vector<FreqBlock> freq_parts;
  std::vector<TimeSignal> time_parts;

  int m() const { return static_cast<int>(time_parts.size()); }
  int n_samples() const { return time_parts.empty() ? 0 : time_parts[0].size(); }
};

/// M unit-magnitude phase factors drawn from the W-point alphabet
/// {exp(j*2*pi*l/W) : l = 0..W-1}.
struct PhaseVector {
  std::vector<cxd> factors;
  int w_alphabet = 2;
};

/// Binary reformulation of a W=2 phase vector: b = 1 - 2c.
struct BinaryVector {
  std::vector<uint8_t> bits;

  int size() const { return static_cast<int>(bits.size()); }
  PhaseVector to_phases() const;
  uint64_t to_mask() const;  // bit i = c_i
  static BinaryVector from_mask(uint64_t mask, int m);
};

/// The W-point phase alphabet. Multiples of a quarter turn are exact
/// ({1, -1, j, -j}), everything else via cos/sin.
std::vector<cxd> phase_alphabet(int w);

/// Deterministic partition of N subcarriers into M sub-blocks.
///  - random: seeded shuffle of 0..N-1 split into M consecutive groups of N/M
///  - adjacent: contiguous runs (exactly N/M long when M | N)
///  - interleaved: subcarrier n -> sub-block n mod M
/// random and interleaved require M | N.
Partition make_partition(int n_subcarriers, int m_subblocks, PartitionScheme scheme,
                         uint64_t seed);

/// Zeroes non-member subcarriers per sub-block and precomputes each
/// sub-block's oversampled time signal.
SubblockSet split_and_transform(const FreqBlock& block, const Partition& partition,
                                int oversampling);

/// Phase-weighted combination x'(b) = sum_m b_m * x_m.
TimeSignal combine(const SubblockSet& set, const PhaseVector& b);

/// The quantity every optimizer minimizes: F(c) = papr(combine(set, 1 - 2c)).
PaprValue objective(const SubblockSet& set, const BinaryVector& c);

}  // namespace paprsim
