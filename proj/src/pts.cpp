#include "paprsim/pts.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

namespace paprsim {

const char* scheme_name(PartitionScheme s) {
  switch (s) {
    case PartitionScheme::random: return "random";
    case PartitionScheme::adjacent: return "adjacent";
    case PartitionScheme::interleaved: return "interleaved";
  }
  return "random";
}

PartitionScheme scheme_from_name(const std::string& name) {
  if (name == "random") return PartitionScheme::random;
  if (name == "adjacent") return PartitionScheme::adjacent;
  if (name == "interleaved") return PartitionScheme::interleaved;
  throw std::invalid_argument("unknown partition scheme: " + name);
}

PhaseVector BinaryVector::to_phases() const {
  PhaseVector b;
  b.w_alphabet = 2;
  b.factors.resize(bits.size());
  for (size_t i = 0; i < bits.size(); ++i)
    b.factors[i] = cxd(1.0 - 2.0 * bits[i], 0.0);
  return b;
}

uint64_t BinaryVector::to_mask() const {
  uint64_t mask = 0;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) mask |= uint64_t(1) << i;
  return mask;
}

BinaryVector BinaryVector::from_mask(uint64_t mask, int m) {
  BinaryVector c;
  c.bits.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) c.bits[i] = static_cast<uint8_t>((mask >> i) & 1u);
  return c;
}

std::vector<cxd> phase_alphabet(int w) {
  if (w < 1) throw std::invalid_argument("phase_alphabet: W must be >= 1");
  std::vector<cxd> alphabet(static_cast<size_t>(w));
  for (int l = 0; l < w; ++l) {
    if ((4 * l) % w == 0) {
      // quarter-turn multiple: exact axis value
      switch ((4 * l) / w % 4) {
        case 0: alphabet[l] = cxd(1.0, 0.0); break;
        case 1: alphabet[l] = cxd(0.0, 1.0); break;
        case 2: alphabet[l] = cxd(-1.0, 0.0); break;
        case 3: alphabet[l] = cxd(0.0, -1.0); break;
      }
    } else {
      double phi = 2.0 * std::numbers::pi * l / w;
      alphabet[l] = cxd(std::cos(phi), std::sin(phi));
    }
  }
  return alphabet;
}

Partition make_partition(int n_subcarriers, int m_subblocks, PartitionScheme scheme,
                         uint64_t seed) {
  if (n_subcarriers < 1) throw std::invalid_argument("make_partition: N must be >= 1");
  if (m_subblocks < 1) throw std::invalid_argument("make_partition: M must be >= 1");
  const int n = n_subcarriers;
  const int m = m_subblocks;
  if ((scheme == PartitionScheme::random || scheme == PartitionScheme::interleaved) &&
      n % m != 0)
    throw std::invalid_argument(
        std::string("make_partition: scheme ") + scheme_name(scheme) +
        " requires M to divide N");

  Partition part;
  part.m_subblocks = m;
  part.scheme = scheme;
  part.seed = seed;
  part.assignment.resize(static_cast<size_t>(n));

  switch (scheme) {
    case PartitionScheme::random: {
      std::vector<int> perm(static_cast<size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      Rng rng(seed);
      rng.shuffle(perm);
      int group = n / m;
      for (int pos = 0; pos < n; ++pos) part.assignment[perm[pos]] = pos / group;
      break;
    }
    case PartitionScheme::adjacent: {
      for (int i = 0; i < n; ++i)
        part.assignment[i] = static_cast<int>((static_cast<int64_t>(i) * m) / n);
      break;
    }
    case PartitionScheme::interleaved: {
      for (int i = 0; i < n; ++i) part.assignment[i] = i % m;
      break;
    }
  }
  return part;
}

SubblockSet split_and_transform(const FreqBlock& block, const Partition& partition,
                                int oversampling) {
  if (partition.size() != block.size())
    throw std::invalid_argument("split_and_transform: partition does not cover block");
  const int m = partition.m_subblocks;

  SubblockSet set;
  set.freq_parts.resize(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    set.freq_parts[k].symbols.assign(block.symbols.size(), cxd(0.0, 0.0));
  }
  for (int i = 0; i < block.size(); ++i) {
    set.freq_parts[partition.assignment[i]].symbols[i] = block.symbols[i];
  }
  set.time_parts.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k)
    set.time_parts.push_back(idft_oversampled(set.freq_parts[k], oversampling));
  return set;
}

TimeSignal combine(const SubblockSet& set, const PhaseVector& b) {
  if (static_cast<int>(b.factors.size()) != set.m())
    throw std::invalid_argument("combine: phase vector length does not match sub-block count");
  if (set.m() == 0) throw std::invalid_argument("combine: empty sub-block set");

  const int len = set.n_samples();
  TimeSignal out;
  out.oversampling = set.time_parts[0].oversampling;
  out.samples.assign(static_cast<size_t>(len), cxd(0.0, 0.0));

  for (int k = 0; k < set.m(); ++k) {
    const cxd f = b.factors[k];
    const auto& part = set.time_parts[k].samples;
    cxd* acc = out.samples.data();
    if (f.imag() == 0.0 && (f.real() == 1.0 || f.real() == -1.0)) {
      // the W=2 hot path: a signed add, exact negation symmetry
      if (f.real() > 0.0) {
        for (int i = 0; i < len; ++i) acc[i] += part[i];
      } else {
        for (int i = 0; i < len; ++i) acc[i] -= part[i];
      }
    } else {
      for (int i = 0; i < len; ++i) acc[i] += f * part[i];
    }
  }
  return out;
}

PaprValue objective(const SubblockSet& set, const BinaryVector& c) {
  if (c.size() != set.m())
    throw std::invalid_argument("objective: binary vector length does not match sub-block count");
  return papr(combine(set, c.to_phases()));
}

}  // namespace paprsim
