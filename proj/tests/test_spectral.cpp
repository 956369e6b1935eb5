#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cubelab/dynamics.hpp"
#include "cubelab/parallel.hpp"
#include "cubelab/spectral.hpp"
#include "oracles.hpp"

using namespace cubelab;

namespace {

using Vec = std::vector<cplx>;

const double kAlpha = std::sqrt(2.0) - 1.0;

Orbit orbit(SystemKind kind, const char* obs, std::size_t len, std::uint64_t seed = 7) {
  const SystemSpec s{kind, kind == SystemKind::Doubling ? 0.0 : kAlpha, 0.0, seed, {}};
  return generate_orbit(s, parse_observable(obs), {0.137, 0.291}, len);
}

Vec random_signs(std::uint64_t seed, std::size_t n) {
  SplitMix64 g(seed);
  Vec v(n);
  for (auto& z : v) z = (g.next() >> 63) ? 1.0 : -1.0;
  return v;
}

}  // namespace

TEST_CASE("ww_sup of a constant peaks at zero frequency") {
  for (std::size_t n : {1u, 5u, 64u, 1000u}) {
    const auto w = ww_sup(oracle::constant(n, 1.0), n);
    CHECK(std::abs(w.value - 1.0) < 1e-12);
    CHECK(w.argmax_t == 0.0);
    CHECK(w.n == n);
    CHECK(w.oversample == 8);
  }
}

TEST_CASE("ww_sup of an on-grid exponential is one") {
  const std::size_t n = 100;  // grid 8 * 128 = 1024
  const double beta = 37.0 / 1024.0;
  Vec a(n);
  for (std::size_t m = 0; m < n; ++m) a[m] = unit_phase(beta * m);
  const auto w = ww_sup(a, n);
  CHECK(std::abs(w.value - 1.0) < 1e-12);
  CHECK(w.argmax_t == doctest::Approx(1.0 - beta));
}

TEST_CASE("ww_sup matches a dense-grid evaluation") {
  const std::size_t n = 1024;
  const Vec a = random_signs(2718, n);
  const double dense = oracle::ww_dense(a, n, 64 * n);
  const double grid = ww_sup(a, n, 8).value;
  CHECK(std::abs(grid - dense) < 1e-3);
  CHECK(grid <= dense + 1e-12);
}

TEST_CASE("ww_sup nested grids are monotone and bracketed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 37 + 11 * seed;
    const Vec a = oracle::random_samples(seed, n);
    double mean_abs = 0.0;
    for (cplx z : a) mean_abs += std::abs(z);
    mean_abs /= n;
    const double mean = std::abs(pairwise_sum(a) / static_cast<double>(n));
    double previous = 0.0;
    for (std::size_t os : {2u, 4u, 8u, 16u, 32u}) {
      const double v = ww_sup(a, n, os).value;
      CHECK(v >= previous - 1e-12);
      CHECK(v >= mean - 1e-12);
      CHECK(v <= mean_abs + 1e-12);
      previous = v;
    }
  }
}

TEST_CASE("ww_sup parameter errors") {
  const Vec a = oracle::constant(10, 1.0);
  CHECK_THROWS_AS(ww_sup(a, 11), Error);
  CHECK_THROWS_AS(ww_sup(a, 10, 3), Error);
  CHECK_THROWS_AS(ww_sup(a, 10, 1), Error);
  CHECK_THROWS_AS(ww_sup(a, 0), Error);
  WWEvaluator eval(10, 4);
  CHECK(eval.grid_size() == 64);
}

TEST_CASE("ww_sup separates mixing from eigenfunction behaviour") {
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", 1 << 14);
  double previous = 1.0;
  for (std::size_t n = 1 << 8; n <= (1 << 14); n <<= 2) {
    const double v = ww_sup(d, n).value;
    CHECK(v < previous);
    previous = v;
  }
  CHECK(previous < 0.1);
  const Orbit r = orbit(SystemKind::Rotation, "e(1)", 1 << 14);
  for (std::size_t n = 1 << 8; n <= (1 << 14); n <<= 1) CHECK(ww_sup(r, n).value >= 0.99);
}

TEST_CASE("correlation examples") {
  const Vec c = oracle::constant(30, cplx(0.6, -0.8) * 2.0);
  CHECK(std::abs(correlation(c, 3, 20) - 4.0) < 1e-14);
  const Orbit r = orbit(SystemKind::Rotation, "e(1)", 600);
  for (std::size_t h : {0u, 1u, 17u, 99u}) {
    const cplx want = unit_phase(-frac_product(h, kAlpha));
    CHECK(std::abs(correlation(r, h, 500) - want) < 1e-12);
  }
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", (1 << 16) + 1);
  CHECK(std::abs(correlation(d, 1, 1 << 16)) < 0.02);
  CHECK_THROWS_AS(correlation(c, 11, 20), Error);
}

TEST_CASE("FFT correlations match the direct sums") {
  const Vec a = oracle::random_samples(3, 300);
  const auto r = correlations(a, 200, 100);
  REQUIRE(r.size() == 100);
  for (std::size_t h : {0u, 1u, 50u, 99u}) {
    CHECK(std::abs(r[h] - oracle::correlation(a, h, 200)) < 1e-13);
    CHECK(std::abs(r[h] - correlation(a, h, 200)) < 1e-13);
  }
}

TEST_CASE("seminorm2 of a constant is its modulus") {
  for (cplx c : {cplx(1.0), cplx(-2.5), cplx(0.3, 0.4), cplx(0.0)}) {
    for (auto [n, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {10, 3}, {1000, 64}}) {
      const Vec a = oracle::constant(n + h, c);
      const auto e = seminorm2(a, n, h);
      CHECK(std::abs(e.value - std::abs(c)) < 1e-9);
      CHECK(e.order == 2);
      CHECK(e.h == h);
      CHECK(e.n == n);
    }
  }
}

TEST_CASE("seminorm2 agrees with the direct oracle") {
  const Vec a = oracle::random_samples(12, 700);
  CHECK(std::abs(seminorm2(a, 500, 150).value - oracle::seminorm2(a, 500, 150)) < 1e-12);
  CHECK_THROWS_AS(seminorm2(a, 600, 101), Error);
}

TEST_CASE("seminorm2 is stable under a one-step shift") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const std::size_t n = 2000, h = 32;
    const Orbit o = orbit(SystemKind::Doubling, "cos(1) + 0.5*e(2) + 0.3", n + h + 1, seed);
    const double here = seminorm2(o, n, h).value;
    const double shifted = seminorm2(o.samples().subspan(1), n, h).value;
    CHECK(std::abs(here - shifted) <= 5.0 / n);
  }
}

TEST_CASE("seminorm2 closed forms on the catalog") {
  const std::size_t n = 1 << 16, h = 1 << 11;
  const Orbit r = orbit(SystemKind::Rotation, "cos(1)", n + h);
  CHECK(std::abs(seminorm2(r, n, h).value - std::pow(1.0 / 8.0, 0.25)) < 0.02);
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", n + h);
  CHECK(seminorm2(d, n, h).value <= std::pow(1.0 / (2.0 * h), 0.25) + 0.05);
}

TEST_CASE("skew-product quasi-eigenfunction: order 2 at the h=0 floor, order 3 near one") {
  // For e(y) every h >= 1 correlation is a nonresonant x-character average, so
  // only the h = 0 term survives: seminorm2^4 = (1 + O(1/N)) / H.
  const std::size_t n = 1 << 14, h = 1 << 8;
  const Orbit s = orbit(SystemKind::SkewProduct, "e(0,1)", n + 2 * h);
  const double v2 = seminorm2(s, n, h).value;
  CHECK(v2 >= std::pow(1.0 / h, 0.25) - 1e-12);
  CHECK(v2 < std::pow(1.0 / h, 0.25) + 0.01);
  const auto v3 = seminorm3(s, n, h, h);
  CHECK(v3.value > 0.8);
  CHECK(v3.order == 3);
  CHECK(v3.h_inner == h);
}

TEST_CASE("seminorm3 basics") {
  const Vec ones = oracle::constant(300, 1.0);
  CHECK(std::abs(seminorm3(ones, 100, 20, 30).value - 1.0) < 1e-12);
  CHECK_THROWS_AS(seminorm3(ones, 100, 100, 101), Error);
  const Vec a = oracle::random_samples(4, 400);
  set_thread_count(4);
  const double many = seminorm3(a, 200, 60, 40).value;
  set_thread_count(1);
  CHECK(seminorm3(a, 200, 60, 40).value == many);
}

TEST_CASE("seminorm3 on the doubling map sits at its finite-H value") {
  // cos(2 pi x) under doubling: the h = 0 product has all inner correlations
  // near 1/4, every h >= 1 product only its lag-0 term 1/4, so
  // seminorm3^8 ~ (1/16)(2/H) and the estimate is (1/(8H))^{1/8}.
  const std::size_t n = 1 << 14, h = 1 << 8;
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", n + 2 * h);
  const double v = seminorm3(d, n, h, h).value;
  CHECK(std::abs(v - std::pow(1.0 / (8.0 * h), 0.125)) < 0.03);
}

TEST_CASE("vdc_bound examples") {
  const auto ones = vdc_bound(oracle::constant(4, 1.0), 4, 1);
  CHECK(ones.lhs == 1.0);
  CHECK(ones.rhs == doctest::Approx(17.5 / 16.0).epsilon(1e-15));
  const auto zero = vdc_bound(oracle::constant(8, 0.0), 8, 3);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK_THROWS_AS(vdc_bound(oracle::constant(8, 1.0), 8, 8), Error);
  CHECK_THROWS_AS(vdc_bound(oracle::constant(8, 1.0), 8, 0), Error);
}

TEST_CASE("vdc_bound holds on random and structured inputs") {
  int violations = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const Vec u = oracle::random_samples(trial_seed(42, trial), 256);
    const auto b = vdc_bound(u, 256, 16);
    violations += b.lhs <= b.rhs ? 0 : 1;
  }
  CHECK(violations == 0);
  for (std::size_t n : {2u, 3u, 17u, 200u}) {
    for (std::size_t h = 1; h < n; h += 1 + h / 2) {
      const auto b = vdc_bound(oracle::constant(n, cplx(0.0, 1.0)), n, h);
      CHECK(b.lhs <= b.rhs * (1 + 1e-14));
      const auto s = vdc_bound(random_signs(n + h, n), n, h);
      CHECK(s.lhs <= s.rhs * (1 + 1e-14));
    }
  }
}

TEST_CASE("lemma2_check") {
  const auto zero = lemma2_check(oracle::constant(40, 0.0), 20, 8);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == doctest::Approx(4.0 / 8.0));
  CHECK_FALSE(zero.violated);
  const std::size_t n = 1 << 14, h = 1 << 7;
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", n + h);
  const auto dd = lemma2_check(d, n, h);
  CHECK(dd.lhs < dd.rhs);
  const Orbit r = orbit(SystemKind::Rotation, "e(1)", n + h);
  const auto rr = lemma2_check(r, n, h);
  // Off-grid frequency: worst offset 1/(16N) costs at most a sinc^2 factor.
  const double sinc = std::sin(std::numbers::pi / 16) / (std::numbers::pi / 16);
  CHECK(rr.lhs >= sinc * sinc);
  CHECK(rr.lhs <= 1.0 + 1e-12);
  CHECK(rr.rhs == doctest::Approx(4.0 * (1.0 + 1.0 / h)).epsilon(1e-9));
  CHECK_FALSE(rr.violated);
  CHECK_THROWS_AS(lemma2_check(d, n, n), Error);
}

TEST_CASE("lemma3_quantity degenerate inputs and range") {
  const Vec ones = oracle::constant(63, 1.0), zeros = oracle::constant(63, 0.0);
  CHECK(std::abs(lemma3_quantity(ones, ones, 32) - 1.0) < 1e-12);
  CHECK(lemma3_quantity(zeros, ones, 32) == 0.0);
  CHECK(lemma3_quantity(ones, zeros, 32) == 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Vec a = oracle::random_samples(seed, 40), b = oracle::random_samples(seed + 100, 79);
    for (auto& z : a) z *= 1.7;
    const double q = lemma3_quantity(a, b, 40);
    CHECK(q >= 0.0);
    CHECK(q <= std::pow(sup_norm(a), 2) * std::pow(sup_norm(b), 2));
  }
  CHECK_THROWS_AS(lemma3_quantity(ones, ones, 33), Error);
}

TEST_CASE("lemma3_quantity against a dense-grid oracle") {
  const std::size_t n = 64;
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", 2 * n);
  const double dense = oracle::lemma3(d, d, n, 64 * n);
  const double grid = lemma3_quantity(d, d, n);
  CHECK(grid <= dense * (1 + 1e-12));
  CHECK(grid >= 0.95 * dense);
}

TEST_CASE("lemma3_quantity decays on the doubling map") {
  const Orbit d = orbit(SystemKind::Doubling, "mz:cos(1)", 2 * 1024);
  const double q64 = lemma3_quantity(d, d, 64);
  const double q256 = lemma3_quantity(d, d, 256);
  const double q1024 = lemma3_quantity(d, d, 1024);
  CHECK(q256 < q64);
  CHECK(q1024 < q256);
}
