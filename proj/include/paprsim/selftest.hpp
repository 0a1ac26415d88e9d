#pragma once

#include <ostream>

namespace paprsim {

// Embedded invariant suite: Parseval, PAPR scale invariance, partition
// disjoint-cover, combine linearity, average-power invariance over all 2^8
// binary phase vectors, complement symmetry, and determinism across reruns
// and worker counts. Prints one line per check; returns the number of
// failed checks (0 = all good).
int selftest(std::ostream& out, bool verbose = true);

}  // namespace paprsim
