#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cubelab/common.hpp"
#include "cubelab/fft.hpp"

namespace cubelab {

/// Grid maximum of the modulated average |(1/N) sum_{n<N} a_n e^{2 pi i n t}|.
struct WWStatistic {
  double value = 0.0;
  std::size_t n = 0;
  std::size_t oversample = 0;
  /// Grid point in [0, 1) where the maximum is first attained.
  double argmax_t = 0.0;
};

/// Reusable evaluator for ww_sup at a fixed horizon and oversampling. The
/// grid is t = j / P, P = oversample * next_pow2(N); grids for oversample s
/// are contained in those for 2s, so the value is monotone in oversample.
class WWEvaluator {
 public:
  WWEvaluator(std::size_t n, std::size_t oversample);

  WWStatistic operator()(Samples a);

  std::size_t grid_size() const noexcept { return transform_.size(); }

 private:
  std::size_t n_;
  std::size_t oversample_;
  Transform transform_;
};

/// oversample must be a power of two >= 2; requires |a| >= N.
WWStatistic ww_sup(Samples a, std::size_t n, std::size_t oversample = 8);

/// Birkhoff estimate of the integral of f * conj(f o T^h):
/// (1/N) sum_{n<N} a_n conj(a_{n+h}). Requires |a| >= N + h.
cplx correlation(Samples a, std::size_t h, std::size_t n);

/// correlation(a, h, N) for every h < lags, by one transform.
std::vector<cplx> correlations(Samples a, std::size_t n, std::size_t lags);

struct SeminormEstimate {
  int order = 2;
  double value = 0.0;
  /// Outer averaging length (the only one for order 2).
  std::size_t h = 0;
  /// Inner averaging length for order 3; equals h for order 2.
  std::size_t h_inner = 0;
  std::size_t n = 0;
  std::string orbit;
};

/// [ (1/H) sum_{h=0}^{H-1} |correlation(a, h, N)|^2 ]^{1/4}. Requires |a| >= N + H.
SeminormEstimate seminorm2(Samples a, std::size_t n, std::size_t h);

/// [ (1/H_o) sum_{h=0}^{H_o-1} seminorm2(a * conj(shift(a, h)), N, H_i)^4 ]^{1/8}
/// with shift(a, h)_n = a_{n+h}. Requires |a| >= N + H_i + H_o.
SeminormEstimate seminorm3(Samples a, std::size_t n, std::size_t h_outer, std::size_t h_inner);

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Van der Corput's inequality in the Kuipers-Niederreiter form, for
/// 1 <= H < N:
///
///   |(1/N) sum_{n<N} u_n|^2
///     <= (N+H)/(N^2 (H+1)) sum_{n<N} |u_n|^2
///      + 2(N+H)/(N^2 (H+1)) sum_{h=1}^{H} (1 - h/(H+1)) |sum_{n<N-h} u_n conj(u_{n+h})|
///
/// Returns both sides; lhs <= rhs holds for every input.
BoundPair vdc_bound(Samples u, std::size_t n, std::size_t h);

/// Constant in the finite-N van der Corput bound used by lemma2_check.
///
/// Apply vdc_bound to u_n = a_n e^{2 pi i n t} with |a_n| <= 1. The lag sums
/// do not depend on t. Bounding (N+H)/N <= 2 (from H < N) and the weight
/// (1 - h/(H+1)) <= 1 gives
///   sup_t |mean|^2 <= 2/(H+1) + (4/(H+1)) sum_{h=1}^H |(1/N) sum a_n conj(a_{n+h})|
/// and both coefficients are at most 4/H.
inline constexpr double kLemma2Constant = 4.0;

struct Lemma2Result {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs > rhs. Not an error: the bound only controls the limit in N.
  bool violated = false;
};

/// lhs = ww_sup(a, N, 8)^2,
/// rhs = C (1/H + (1/H) sum_{h=1}^{H} |correlation(a, h, N)|) with C = 4.
/// Requires |a| >= N + H.
Lemma2Result lemma2_check(Samples a, std::size_t n, std::size_t h);

/// (1/N) sum_{n<N} sup_t |(1/N) sum_{m<N} a_m b_{n+m} e^{2 pi i m t}|^2 with
/// the sup taken on the ww_sup grid. Requires |a| >= N, |b| >= 2N - 1.
double lemma3_quantity(Samples a, Samples b, std::size_t n, std::size_t oversample = 8);

}  // namespace cubelab
