#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gof/rng.hpp"

using gof::RngStream;

namespace {

// Reference Philox 4x32-10, written separately from the library so a
// transcription slip in either copy shows up as a mismatch.
std::array<std::uint32_t, 4> ref_block(std::array<std::uint32_t, 4> c,
                                       std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c[2];
    std::array<std::uint32_t, 4> next;
    next[0] = static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0];
    next[1] = static_cast<std::uint32_t>(p1);
    next[2] = static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1];
    next[3] = static_cast<std::uint32_t>(p0);
    c = next;
    k[0] += 0x9E3779B9u;
    k[1] += 0xBB67AE85u;
  }
  return c;
}

}  // namespace

TEST_CASE("zero key and counter reproduce the published block") {
  // Known-answer vector for Philox 4x32 with 10 rounds, all-zero input.
  RngStream r(0);
  CHECK(r.next_u32() == 0x6627e8d5u);
  CHECK(r.next_u32() == 0xe169c58du);
  CHECK(r.next_u32() == 0xbc57ac4cu);
  CHECK(r.next_u32() == 0x9b00dbd8u);
}

TEST_CASE("raw output matches the reference generator block by block") {
  for (std::uint64_t seed : {std::uint64_t{0}, std::uint64_t{42},
                             std::uint64_t{0x123456789abcdef0ull}}) {
    for (std::uint64_t stream :
         {std::uint64_t{0}, std::uint64_t{7}, std::uint64_t{1} << 40}) {
      RngStream r(seed, stream);
      std::array<std::uint32_t, 2> key = {
          static_cast<std::uint32_t>(seed),
          static_cast<std::uint32_t>(seed >> 32)};
      for (std::uint32_t block = 0; block < 3; ++block) {
        std::array<std::uint32_t, 4> ctr = {
            block, 0, static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32)};
        auto expect = ref_block(ctr, key);
        for (int i = 0; i < 4; ++i) CHECK(r.next_u32() == expect[i]);
      }
    }
  }
}

TEST_CASE("u64 is two u32 draws, low word first") {
  RngStream a(99, 5), b(99, 5);
  for (int i = 0; i < 8; ++i) {
    std::uint64_t lo = b.next_u32();
    std::uint64_t hi = b.next_u32();
    CHECK(a.next_u64() == ((hi << 32) | lo));
  }
}

TEST_CASE("uniform lies in [0,1) and uses the top 53 bits") {
  RngStream probe(0);
  std::uint64_t lo = probe.next_u32();
  std::uint64_t hi = probe.next_u32();
  double expect =
      static_cast<double>(((hi << 32) | lo) >> 11) * std::ldexp(1.0, -53);
  RngStream r(0);
  CHECK(r.uniform() == expect);

  RngStream s(314);
  for (int i = 0; i < 10000; ++i) {
    double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform sample mean is where it should be") {
  RngStream r(2024);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += r.uniform();
  // 4 standard errors of the mean of U(0,1)
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("uniform(a,b) respects its range") {
  RngStream r(7);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform(-3.0, 2.5);
    CHECK(u >= -3.0);
    CHECK(u < 2.5);
  }
}

TEST_CASE("normal moments") {
  RngStream r(55);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("below is unbiased over its range") {
  RngStream r(11);
  CHECK_THROWS_AS(r.below(0), std::invalid_argument);
  for (int i = 0; i < 100; ++i) CHECK(r.below(1) == 0);

  const int n = 60000;
  std::array<int, 6> counts{};
  for (int i = 0; i < n; ++i) {
    std::uint32_t v = r.below(6);
    REQUIRE(v < 6);
    ++counts[v];
  }
  // per-bin 4 sigma band around n/6
  double sigma = std::sqrt(n * (1.0 / 6.0) * (5.0 / 6.0));
  for (int c : counts) CHECK(std::abs(c - n / 6.0) < 4.0 * sigma);
}

TEST_CASE("permutation produces a permutation and shuffle keeps the multiset") {
  RngStream r(101);
  auto p = r.permutation(10);
  auto sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 10; ++i) CHECK(sorted[i] == i);

  std::vector<int> v = {5, 5, 2, 9, 1, 1, 1};
  auto w = v;
  r.shuffle(w);
  std::sort(v.begin(), v.end());
  auto ws = w;
  std::sort(ws.begin(), ws.end());
  CHECK(v == ws);

  RngStream a(1), b(2);
  CHECK(a.permutation(20) != b.permutation(20));
}

TEST_CASE("substreams are deterministic, distinct and draw-independent") {
  RngStream parent(77, 3);
  RngStream c1 = parent.substream(4);
  RngStream c2 = parent.substream(4);
  for (int i = 0; i < 16; ++i) CHECK(c1.next_u32() == c2.next_u32());

  // deriving a child must not depend on how much the parent has drawn
  RngStream drained(77, 3);
  for (int i = 0; i < 100; ++i) drained.next_u32();
  RngStream c3 = drained.substream(4);
  RngStream c4 = RngStream(77, 3).substream(4);
  for (int i = 0; i < 16; ++i) CHECK(c3.next_u32() == c4.next_u32());

  // different ids, and parent vs child, give different draws
  RngStream d0 = parent.substream(0);
  RngStream d1 = parent.substream(1);
  RngStream p2(77, 3);
  CHECK(d0.next_u32() != d1.next_u32());
  CHECK(p2.next_u32() != parent.substream(2).next_u32());

  // nesting reaches distinct streams too
  RngStream n1 = RngStream(9).substream(0).substream(1);
  RngStream n2 = RngStream(9).substream(1).substream(0);
  CHECK(n1.next_u32() != n2.next_u32());
}
