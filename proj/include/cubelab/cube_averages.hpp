#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cubelab/common.hpp"

namespace cubelab {

/// (1/N^2) sum_{n,m<N} a_n b_m c_{n+m} by the direct double loop.
///
/// Terms are grouped by s = n + m and each anti-diagonal pairs (n, s-n) with
/// (s-n, n) before tree summation, so swapping `a` and `b` gives a bitwise
/// identical result.
/// Requires |a|, |b| >= N and |c| >= 2N-1.
cplx cube3_naive(Samples a, Samples b, Samples c, std::size_t n);

/// Same value through sum_s (a * b)_s c_s with one zero-padded power-of-two
/// cyclic convolution of length >= 2N-1. O(N log N).
cplx cube3_fast(Samples a, Samples b, Samples c, std::size_t n);

/// The seven-function average
///   (1/N^3) sum_{m,n,p<N} f1(m) f2(n) f3(m+n) f4(p) f5(m+p) f6(n+p) f7(m+n+p)
/// with f[0..6] = f1..f7. Lengths: f1, f2, f4 >= N; f3, f5, f6 >= 2N-1;
/// f7 >= 3N-2.
using Seven = std::array<Samples, 7>;

cplx cube7_naive(const Seven& f, std::size_t n);

/// For each p the inner (m, n) sum is a three-function cube over
/// u(m) = f1(m) f5(m+p), v(n) = f2(n) f6(n+p), w(s) = f3(s) f7(s+p),
/// weighted by f4(p). O(N^2 log N).
cplx cube7_fast(const Seven& f, std::size_t n);

/// Windowed average over n, m in [first, last], normalized by the number of
/// terms (last - first + 1)^2. Requires first < last, |a|, |b| >= last + 1
/// and |c| >= 2 last + 1. With first = 0 this is cube3_naive at horizon
/// last + 1, bit for bit.
cplx windowed_cube3(Samples a, Samples b, Samples c, std::size_t first, std::size_t last);

enum class Method { Naive, Fast };

struct AverageTrace {
  std::vector<std::size_t> horizons;
  std::vector<cplx> values;
  Method method = Method::Fast;
  std::vector<std::string> inputs;
};

/// Horizons at or below this size are also evaluated naively inside trace()
/// and compared against the fast value.
inline constexpr std::size_t kSelfCheckCrossover = 32;

/// Evaluates the cube average of order k (2 -> three functions, 3 -> seven,
/// general k -> 2^k - 1) at every horizon with the fast evaluator. The
/// functions are indexed as in CubeSpec. Throws ErrorCode::SelfCheck if a
/// naive re-evaluation at a small horizon disagrees beyond 1e-8 relative.
AverageTrace trace(int k, const std::vector<Samples>& functions,
                   const std::vector<std::size_t>& horizons,
                   std::vector<std::string> inputs = {});

/// CSV with header "N,re,im,abs".
void write_trace_csv(std::ostream& out, const AverageTrace& t);

/// True when |value| shows an overall decrease: the least-squares slope of
/// log|value| against log N is negative and the last value is below the
/// first.
bool decreasing_trend(const AverageTrace& t);

/// |x - y| / max(|y|, floor). Used for every naive/fast comparison.
double relative_error(cplx x, cplx y, double floor = 1e-300);

}  // namespace cubelab
