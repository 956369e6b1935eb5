#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "cubelab/common.hpp"
#include "cubelab/parallel.hpp"
#include "cubelab/rng.hpp"
#include "oracles.hpp"

using namespace cubelab;

TEST_CASE("pairwise_sum matches an extended precision sum") {
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 100u, 4097u}) {
    const auto v = oracle::random_samples(n + 11, n);
    oracle::lcplx ref = 0;
    for (auto z : v) ref += oracle::L(z);
    const cplx got = pairwise_sum(v);
    CHECK(std::abs(got - oracle::D(ref)) <= 1e-13 * (1.0 + static_cast<double>(n)));
  }
  std::vector<double> ones(1000, 0.1);
  CHECK(pairwise_sum(std::span<const double>(ones)) == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("next_pow2") {
  CHECK(next_pow2(0) == 1);
  CHECK(next_pow2(1) == 1);
  CHECK(next_pow2(2) == 2);
  CHECK(next_pow2(3) == 4);
  CHECK(next_pow2(1023) == 1024);
  CHECK(next_pow2(1025) == 2048);
}

TEST_CASE("unit_phase is exact at quarter turns") {
  CHECK(unit_phase(0.0) == cplx(1.0, 0.0));
  CHECK(unit_phase(0.25) == cplx(0.0, 1.0));
  CHECK(unit_phase(0.5) == cplx(-1.0, 0.0));
  CHECK(unit_phase(0.75) == cplx(0.0, -1.0));
  CHECK(unit_phase(3.25) == cplx(0.0, 1.0));
  CHECK(unit_phase(-0.25) == cplx(0.0, -1.0));
  for (double t : {0.1, 0.37, 0.62, 0.999}) {
    const auto ref = oracle::expi(t);
    CHECK(std::abs(unit_phase(t) - oracle::D(ref)) < 1e-15);
  }
}

TEST_CASE("frac and frac_product") {
  CHECK(frac(2.75) == 0.75);
  CHECK(frac(-0.25) == 0.75);
  CHECK(frac(-1e-20) == 0.0);
  // Exact reference: alpha = m 2^e with an integer mantissa, so n*m is exact in 128 bits.
  const double alpha = std::sqrt(2.0) - 1.0;
  int e = 0;
  const double mant = std::frexp(alpha, &e);
  const auto m = static_cast<unsigned __int128>(std::ldexp(mant, 53));
  const int shift = 53 - e;
  for (std::uint64_t n : {0ull, 1ull, 1000ull, 123456789ull, 1ull << 40, 0xFFFFFFFFFFull}) {
    const unsigned __int128 prod = m * n;
    const unsigned __int128 rem = prod & ((static_cast<unsigned __int128>(1) << shift) - 1);
    const double ref = std::ldexp(static_cast<double>(rem), -shift);
    const double got = frac_product(n, alpha);
    CHECK(got >= 0.0);
    CHECK(got < 1.0);
    const double d = std::abs(ref - got);
    CHECK(std::min(d, 1.0 - d) < 1e-15);
  }
}

TEST_CASE("sup_norm and require_length") {
  const std::vector<cplx> v{{3, 4}, {0, 1}, {-6, 0}};
  CHECK(sup_norm(v) == 6.0);
  CHECK(sup_norm(v, 2) == 5.0);
  CHECK_NOTHROW(require_length(v, 3, "v"));
  try {
    require_length(v, 4, "v");
    FAIL("expected a length error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Length);
  }
}

TEST_CASE("SplitMix64 reference stream") {
  // Published first outputs for seed 0.
  SplitMix64 g(0);
  CHECK(g.next() == 0xE220A8397B1DCDAFull);
  CHECK(g.next() == 0x6E789E6AA1B965F4ull);
  CHECK(g.next() == 0x06C45D188009454Full);
  SplitMix64 h(0);
  CHECK(h.at(0) == 0xE220A8397B1DCDAFull);
  CHECK(h.at(2) == 0x06C45D188009454Full);
  CHECK(trial_seed(7, 5) == SplitMix64(7).at(5));
  SplitMix64 u(99);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("parallel_blocks covers every index once and reports exceptions") {
  for (unsigned threads : {1u, 3u, 8u}) {
    set_thread_count(threads);
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(50,
                                 [](std::size_t i) {
                                   if (i == 31) throw Error(ErrorCode::Parameter, "boom");
                                 }),
                    Error);
  }
  set_thread_count(0);
  CHECK(thread_count() == 1);
}
