#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cubelab/common.hpp"

namespace cubelab {

/// Inputs of the cube average of 2^k - 1 functions
///
///   M_N = (1/N^k) sum_{i_1..i_k < N} prod_{j=1}^{2^k-1} f_j(T^{sum_{l in e_j} i_l} x)
///
/// functions[j-1] holds f_j. The index set e_j is read off the binary
/// expansion of j: bit l-1 set <=> i_l in e_j. For k = 3 with (i_1, i_2, i_3) =
/// (m, n, p) this gives 1:{m} 2:{n} 3:{m,n} 4:{p} 5:{m,p} 6:{n,p} 7:{m,n,p}.
struct CubeSpec {
  int k = 2;
  std::vector<Samples> functions;

  std::size_t count() const noexcept { return (std::size_t{1} << k) - 1; }

  /// Minimum length of f_j for horizon N: |e_j| (N - 1) + 1.
  static std::size_t required_length(std::size_t j, std::size_t n);

  /// Throws ErrorCode::Parameter on a bad k or function count and
  /// ErrorCode::Length on short inputs.
  void validate(std::size_t n) const;
};

struct NaiveOptions {
  /// Refuse when N^k exceeds this many primitive terms.
  double term_budget = 1e9;
  /// Lifts both the budget and the k <= 4 limit.
  bool force = false;
};

/// Direct k-fold loop with nested tree summation.
cplx cubek_naive(const CubeSpec& spec, std::size_t n, NaiveOptions options = {});

/// Fixes i_3..i_k and collapses the (i_1, i_2) double sum into a
/// three-function convolution over
///   u(i_1) = prod_{e ∩ {1,2} = {1}} f_e,  v(i_2) = prod_{e ∩ {1,2} = {2}} f_e,
///   w(s)   = prod_{e ⊇ {1,2}} f_e,
/// times the functions that involve neither index. O(N^{k-1} log N).
cplx cubek_fast(const CubeSpec& spec, std::size_t n);

/// The uniformity statistic
///
///   (1/N^{k-2}) sum_{i_1..i_{k-2}} sup_t |(1/N) sum_{i_k < N} A(i_1..i_{k-2}, i_k) e^{2 pi i i_k t}|^2
///
/// where A = prod_d g_d(i_k + sum_{l in d} i_l) runs over the 2^{k-2}
/// block functions g_d, d a subset of the outer indices in binary order.
/// For k = 3 this is g_0(m) g_1(n + m) with one outer index n; for k = 4
/// the product g_0(m) g_1(n+m) g_2(p+m) g_3(p+n+m). The sup is the grid
/// maximum of ww_sup at the given oversampling.
double lemma4_quantity(int k, const std::vector<Samples>& block, std::size_t n,
                       std::size_t oversample = 8);

}  // namespace cubelab
