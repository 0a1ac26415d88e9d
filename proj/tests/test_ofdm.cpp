#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "paprsim/ofdm.hpp"
#include "paprsim/rng.hpp"

using namespace paprsim;

namespace {

double max_abs_diff(const std::vector<cxd>& a, const std::vector<cxd>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("mix64 matches the splitmix64 reference stream") {
  // first three outputs of splitmix64 seeded with 0
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
  CHECK(mix64(2 * 0x9E3779B97F4A7C15ULL) == 0x06C45D188009454FULL);
}

TEST_CASE("rng streams are deterministic per seed") {
  Rng a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t va = a.next_u64();
    if (va != b.next_u64()) all_equal = false;
    if (va != c.next_u64()) any_diff = true;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform lies in [0,1) and bernoulli endpoints are degenerate") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);

  Rng rb(8);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(rb.bernoulli(0.0));
    CHECK(rb.bernoulli(1.0));
  }
}

TEST_CASE("below stays under its bound and shuffle permutes") {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) CHECK(rng.below(17) < 17);

  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[static_cast<size_t>(i)] = i;
  rng.shuffle(v);
  std::set<int> seen(v.begin(), v.end());
  CHECK(seen.size() == 50);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 49);
}

TEST_CASE("bit draws consume raw words least-significant-bit first") {
  Rng a(5), b(5);
  std::vector<uint8_t> got;
  a.bits(got, 130);
  std::vector<uint8_t> want(130);
  uint64_t word = 0;
  for (size_t i = 0; i < 130; ++i) {
    if (i % 64 == 0) word = b.next_u64();
    want[i] = static_cast<uint8_t>((word >> (i % 64)) & 1u);
  }
  CHECK(got == want);
}

TEST_CASE("qpsk gray mapping pins all four constellation points") {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<uint8_t> bits = {0, 0, 0, 1, 1, 1, 1, 0};
  FreqBlock block = modulate_qpsk(bits);
  REQUIRE(block.size() == 4);
  CHECK(block.symbols[0].real() == doctest::Approx(s).epsilon(1e-15));
  CHECK(block.symbols[0].imag() == doctest::Approx(s).epsilon(1e-15));
  CHECK(block.symbols[1].real() == doctest::Approx(-s).epsilon(1e-15));
  CHECK(block.symbols[1].imag() == doctest::Approx(s).epsilon(1e-15));
  CHECK(block.symbols[2].real() == doctest::Approx(-s).epsilon(1e-15));
  CHECK(block.symbols[2].imag() == doctest::Approx(-s).epsilon(1e-15));
  CHECK(block.symbols[3].real() == doctest::Approx(s).epsilon(1e-15));
  CHECK(block.symbols[3].imag() == doctest::Approx(-s).epsilon(1e-15));
  for (const cxd& z : block.symbols)
    CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("qpsk modulation validates its input") {
  CHECK_THROWS_AS(modulate_qpsk(std::vector<uint8_t>{0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(modulate_qpsk(std::vector<uint8_t>{0, 2}), std::invalid_argument);
}

TEST_CASE("oversampled idft matches the direct synthesis sum") {
  struct Case {
    int n, l;
    uint64_t seed;
  };
  for (Case c : {Case{16, 1, 1}, Case{16, 4, 2}, Case{8, 3, 3}, Case{12, 2, 4}}) {
    CAPTURE(c.n);
    CAPTURE(c.l);
    Rng rng(c.seed);
    FreqBlock block = random_qpsk_block(rng, c.n);
    TimeSignal x = idft_oversampled(block, c.l);
    REQUIRE(x.size() == c.n * c.l);
    CHECK(x.oversampling == c.l);
    CHECK(max_abs_diff(x.samples, oracle::idft(block.symbols, c.l)) <= 1e-10);
  }
}

TEST_CASE("oversampled signal interpolates the critically sampled one") {
  Rng rng(11);
  FreqBlock block = random_qpsk_block(rng, 32);
  TimeSignal base = idft_oversampled(block, 1);
  TimeSignal over = idft_oversampled(block, 4);
  double worst = 0.0;
  for (int k = 0; k < 32; ++k)
    worst = std::max(worst, std::abs(over.samples[static_cast<size_t>(4 * k)] -
                                     base.samples[static_cast<size_t>(k)]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("parseval holds at L=1 and mean power is L-independent") {
  Rng rng(12);
  FreqBlock block = random_qpsk_block(rng, 64);
  double pf = 0.0;
  for (const cxd& z : block.symbols) pf += std::norm(z);

  TimeSignal x1 = idft_oversampled(block, 1);
  double pt = 0.0;
  for (const cxd& z : x1.samples) pt += std::norm(z);
  CHECK(pt == doctest::Approx(pf).epsilon(1e-12));

  for (int l : {1, 2, 4}) {
    TimeSignal x = idft_oversampled(block, l);
    double mean = 0.0;
    for (const cxd& z : x.samples) mean += std::norm(z);
    mean /= static_cast<double>(x.size());
    // unit-power QPSK: time-average power 1 regardless of oversampling
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("papr matches hand values and the brute-force oracle") {
  TimeSignal flat{{cxd(1, 0), cxd(0, 1), cxd(-1, 0)}, 1};
  PaprValue v = papr(flat);
  CHECK(v.ratio == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.db == doctest::Approx(0.0).epsilon(1e-12));

  TimeSignal spiky{{cxd(2, 0), cxd(0, 0)}, 1};
  v = papr(spiky);
  CHECK(v.ratio == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v.db == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-15));

  Rng rng(13);
  for (int rep = 0; rep < 5; ++rep) {
    FreqBlock block = random_qpsk_block(rng, 32);
    TimeSignal x = idft_oversampled(block, 4);
    CHECK(papr(x).ratio ==
          doctest::Approx(oracle::papr_ratio(x.samples)).epsilon(1e-14));
  }
}

TEST_CASE("papr rejects degenerate signals") {
  CHECK_THROWS_AS(papr(TimeSignal{}), std::domain_error);
  CHECK_THROWS_AS(papr(TimeSignal{{cxd(0, 0), cxd(0, 0)}, 1}), std::domain_error);
}

TEST_CASE("random qpsk blocks are valid and seed-deterministic") {
  Rng rng(14);
  FreqBlock a = random_qpsk_block(rng, 64);
  REQUIRE(a.size() == 64);
  const double s = 1.0 / std::sqrt(2.0);
  for (const cxd& z : a.symbols) {
    CHECK(std::abs(std::abs(z.real()) - s) <= 1e-15);
    CHECK(std::abs(std::abs(z.imag()) - s) <= 1e-15);
  }

  Rng rng2(14);
  FreqBlock b = random_qpsk_block(rng2, 64);
  CHECK(max_abs_diff(a.symbols, b.symbols) == 0.0);

  FreqBlock c = random_qpsk_block(rng, 64);  // same rng, further along the stream
  CHECK(max_abs_diff(a.symbols, c.symbols) > 0.0);
}

TEST_CASE("papr value dB conversion") {
  PaprValue v = PaprValue::from_ratio(10.0);
  CHECK(v.db == doctest::Approx(10.0).epsilon(1e-15));
}
