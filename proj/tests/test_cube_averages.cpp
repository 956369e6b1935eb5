#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cubelab/cube_averages.hpp"
#include "cubelab/dynamics.hpp"
#include "cubelab/factors.hpp"
#include "cubelab/parallel.hpp"
#include "oracles.hpp"

using namespace cubelab;

namespace {

using Vec = std::vector<cplx>;

Seven seven(const std::array<Vec, 7>& f) {
  return {f[0], f[1], f[2], f[3], f[4], f[5], f[6]};
}

// Lengths m, n, m+n, p, m+p, n+p, m+n+p for horizon N.
std::array<Vec, 7> random_seven(std::uint64_t seed, std::size_t n) {
  const std::size_t len[7] = {n, n, 2 * n - 1, n, 2 * n - 1, 2 * n - 1, 3 * n - 2};
  std::array<Vec, 7> f;
  for (int i = 0; i < 7; ++i) f[i] = oracle::random_samples(seed * 7 + i, len[i]);
  return f;
}

}  // namespace

TEST_CASE("cube3 small examples") {
  const Vec ones = oracle::constant(20, 1.0), zeros = oracle::constant(20, 0.0);
  for (std::size_t n : {1u, 4u, 10u}) {
    CHECK(cube3_naive(ones, ones, ones, n) == cplx(1.0));
    CHECK(std::abs(cube3_fast(ones, ones, ones, n) - 1.0) < 1e-15);
  }
  const auto a = oracle::random_samples(1, 10), b = oracle::random_samples(2, 10);
  CHECK(cube3_naive(a, b, zeros, 10) == cplx(0.0));
  CHECK(cube3_fast(a, b, zeros, 10) == cplx(0.0));
  const Vec ha{1, 2}, hb{1, 1}, hc{1, 0, 1};
  CHECK(cube3_naive(ha, hb, hc, 2) == cplx(0.75));
  CHECK(std::abs(cube3_fast(ha, hb, hc, 2) - 0.75) < 1e-15);
  const Vec big = oracle::constant(1999, 1.0);
  CHECK(std::abs(cube3_fast(big, big, big, 1000) - 1.0) < 1e-12);
}

TEST_CASE("cube3 length errors") {
  const Vec a = oracle::constant(8, 1.0), c = oracle::constant(14, 1.0);
  CHECK_THROWS_AS(cube3_naive(a, a, c, 8), Error);
  CHECK_THROWS_AS(cube3_fast(a, a, c, 8), Error);
  CHECK_THROWS_AS(cube3_naive(a, a, oracle::constant(20, 1.0), 9), Error);
}

TEST_CASE("cube3 naive matches the extended precision oracle") {
  for (std::size_t n : {1u, 3u, 17u, 64u}) {
    const auto a = oracle::random_samples(n, n), b = oracle::random_samples(n + 1, n);
    const auto c = oracle::random_samples(n + 2, 2 * n - 1);
    CHECK(oracle::rel(cube3_naive(a, b, c, n), oracle::cube3(a, b, c, n)) < 1e-12);
  }
}

TEST_CASE("cube3 fast equals naive on 200 random inputs per horizon") {
  for (std::size_t n : {3u, 7u, 64u, 257u, 512u}) {
    double worst = 0.0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      const std::uint64_t s = trial_seed(n, trial);
      const auto a = oracle::random_samples(s, n), b = oracle::random_samples(s + 1, n);
      const auto c = oracle::random_samples(s + 2, 2 * n - 1);
      worst = std::max(worst, oracle::rel(cube3_fast(a, b, c, n), cube3_naive(a, b, c, n)));
    }
    INFO("N = " << n);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("cube3 is multilinear, bounded and symmetric in the free indices") {
  const std::size_t n = 40;
  const auto a = oracle::random_samples(10, n), b = oracle::random_samples(11, n);
  const auto c = oracle::random_samples(12, 2 * n - 1);
  const cplx lambda(0.3, -1.7);
  const cplx base = cube3_naive(a, b, c, n);
  for (int which = 0; which < 3; ++which) {
    Vec sa = a, sb = b, sc = c;
    Vec& target = which == 0 ? sa : which == 1 ? sb : sc;
    for (auto& z : target) z *= lambda;
    CHECK(oracle::rel(cube3_naive(sa, sb, sc, n), lambda * base) < 1e-12);
    CHECK(oracle::rel(cube3_fast(sa, sb, sc, n), lambda * cube3_fast(a, b, c, n)) < 1e-12);
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = oracle::random_samples(s, n), y = oracle::random_samples(s + 50, n);
    const auto z = oracle::random_samples(s + 99, 2 * n - 1);
    const double bound = sup_norm(x) * sup_norm(y) * sup_norm(z);
    CHECK(std::abs(cube3_naive(x, y, z, n)) <= bound);
    CHECK(std::abs(cube3_fast(x, y, z, n)) <= bound * (1 + 1e-12));
    CHECK(cube3_naive(x, y, z, n) == cube3_naive(y, x, z, n));
  }
}

TEST_CASE("cube7 small examples") {
  std::array<Vec, 7> ones;
  for (auto& f : ones) f = oracle::constant(298, 1.0);
  CHECK(cube7_naive(seven(ones), 5) == cplx(1.0));
  CHECK(std::abs(cube7_fast(seven(ones), 100) - 1.0) < 1e-12);
  auto z7 = ones;
  z7[6] = oracle::constant(298, 0.0);
  CHECK(cube7_naive(seven(z7), 5) == cplx(0.0));
  auto z4 = ones;
  z4[3] = oracle::constant(298, 0.0);
  CHECK(cube7_fast(seven(z4), 20) == cplx(0.0));
  auto f = ones;
  f[0] = Vec{1, 2};
  CHECK(cube7_naive(seven(f), 2) == cplx(1.5));
  CHECK(std::abs(cube7_fast(seven(f), 2) - 1.5) < 1e-15);
  auto short7 = ones;
  short7[6] = oracle::constant(12, 1.0);
  CHECK_THROWS_AS(cube7_naive(seven(short7), 5), Error);
  CHECK_THROWS_AS(cube7_fast(seven(short7), 5), Error);
}

TEST_CASE("cube7 naive matches the generic oracle") {
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const auto f = random_seven(n, n);
    const std::vector<Samples> v(f.begin(), f.end());
    CHECK(oracle::rel(cube7_naive(seven(f), n), oracle::cubek(3, v, n)) < 1e-12);
  }
}

TEST_CASE("cube7 fast equals naive") {
  for (std::size_t n : {2u, 3u, 8u, 16u, 32u, 64u}) {
    const int trials = n <= 16 ? 20 : 3;
    for (int t = 0; t < trials; ++t) {
      const auto f = random_seven(n * 100 + t, n);
      INFO("N = " << n << " trial " << t);
      CHECK(oracle::rel(cube7_fast(seven(f), n), cube7_naive(seven(f), n)) < 1e-8);
    }
  }
}

TEST_CASE("cube7 multilinearity and boundedness") {
  const std::size_t n = 12;
  const auto f = random_seven(3, n);
  const cplx base = cube7_naive(seven(f), n);
  const cplx lambda(-0.4, 2.1);
  for (int i = 0; i < 7; ++i) {
    auto g = f;
    for (auto& z : g[i]) z *= lambda;
    CHECK(oracle::rel(cube7_naive(seven(g), n), lambda * base) < 1e-12);
  }
  double bound = 1.0;
  for (const auto& v : f) bound *= sup_norm(v);
  CHECK(std::abs(base) <= bound);
  CHECK(std::abs(cube7_fast(seven(f), n)) <= bound * (1 + 1e-12));
}

TEST_CASE("cube7 fast is independent of the thread count") {
  const auto f = random_seven(77, 24);
  set_thread_count(1);
  const cplx one = cube7_fast(seven(f), 24);
  set_thread_count(5);
  const cplx many = cube7_fast(seven(f), 24);
  set_thread_count(1);
  CHECK(one == many);
}

TEST_CASE("windowed cube3") {
  const Vec ones = oracle::constant(40, 1.0);
  CHECK(windowed_cube3(ones, ones, ones, 3, 7) == cplx(1.0));
  const auto a = oracle::random_samples(1, 13), b = oracle::random_samples(2, 13);
  const auto c = oracle::random_samples(3, 25);
  CHECK(oracle::rel(windowed_cube3(a, b, c, 5, 12), oracle::cube3_window(a, b, c, 5, 12)) < 1e-12);
  for (std::size_t n0 : {2u, 5u, 13u})
    CHECK(windowed_cube3(a, b, c, 0, n0 - 1) == cube3_naive(a, b, c, n0));
  CHECK_THROWS_AS(windowed_cube3(a, b, c, 4, 4), Error);
  CHECK_THROWS_AS(windowed_cube3(a, b, c, 5, 13), Error);
  try {
    windowed_cube3(a, b, c, 6, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Window);
  }
}

TEST_CASE("trace of all-ones inputs") {
  const Vec ones = oracle::constant(64, 1.0);
  const AverageTrace t = trace(2, {ones, ones, ones}, {2, 4, 8});
  REQUIRE(t.values.size() == 3);
  for (cplx v : t.values) CHECK(std::abs(v - 1.0) < 1e-14);
  CHECK(t.method == Method::Fast);
  std::ostringstream csv;
  write_trace_csv(csv, t);
  CHECK(csv.str().rfind("N,re,im,abs\n2,", 0) == 0);
}

TEST_CASE("trace rejects bad horizons and short orbits") {
  const Vec ones = oracle::constant(64, 1.0);
  CHECK_THROWS_AS(trace(2, {ones, ones, ones}, {4, 4}), Error);
  CHECK_THROWS_AS(trace(2, {ones, ones, ones}, {}), Error);
  CHECK_THROWS_AS(trace(2, {ones, ones, ones}, {8, 40}), Error);
}

TEST_CASE("trace values are bounded by the product of sup norms") {
  const std::size_t n = 64;
  std::vector<Vec> f;
  for (int i = 0; i < 7; ++i) f.push_back(oracle::random_samples(i + 500, 3 * n));
  const std::vector<Samples> views(f.begin(), f.end());
  double bound = 1.0;
  for (const auto& v : f) bound *= sup_norm(v);
  const AverageTrace t = trace(3, views, {4, 16, 33, 64});
  for (cplx v : t.values) CHECK(std::abs(v) <= bound);
}

TEST_CASE("doubling map trace decays") {
  const SystemSpec s{SystemKind::Doubling, 0.0, 0.0, 2024, {}};
  const auto obs = parse_observable("mz:cos(1) + 0.5*sin(3)");
  const std::size_t top = 4096;
  const Orbit a = generate_orbit(s, obs, {}, 2 * top);
  const AverageTrace t = trace(2, {a, a, a}, {64, 128, 256, 512, 1024, 2048, 4096});
  CHECK(decreasing_trend(t));
  CHECK(std::abs(t.values.back()) < 0.05);
}

TEST_CASE("rotation trace follows the eigenfunction identity") {
  const double alpha = std::sqrt(2.0) - 1.0;
  const SystemSpec s{SystemKind::Rotation, alpha, 0.0, 0, {}};
  const Point x0{0.17, 0.0};
  const Orbit e = generate_orbit(s, Observable::character(1), x0, 2 * 256);
  const AverageTrace t = trace(2, {e, e, e}, {8, 32, 128, 256});
  for (std::size_t j = 0; j < t.horizons.size(); ++j) {
    const auto [lhs, rhs] = eigenfunction_identity_check(e, e, e, alpha, e[0], t.horizons[j]);
    CHECK(std::abs(t.values[j] - rhs) < 1e-12);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("decreasing_trend and relative_error") {
  AverageTrace t;
  t.horizons = {10, 100, 1000};
  t.values = {1.0, 0.1, 0.01};
  CHECK(decreasing_trend(t));
  t.values = {0.01, 0.1, 1.0};
  CHECK_FALSE(decreasing_trend(t));
  CHECK(relative_error(1.0, 2.0) == 0.5);
  CHECK(relative_error(1e-20, 0.0, 1e-10) == doctest::Approx(1e-10));
}
