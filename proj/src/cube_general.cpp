#include "cubelab/cube_general.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "cubelab/fft.hpp"
#include "cubelab/parallel.hpp"
#include "cubelab/spectral.hpp"

namespace cubelab {

std::size_t CubeSpec::required_length(std::size_t j, std::size_t n) {
  return static_cast<std::size_t>(std::popcount(j)) * (n - 1) + 1;
}

void CubeSpec::validate(std::size_t n) const {
  if (k < 2 || k > 20) throw Error(ErrorCode::Parameter, "cube: k must lie in [2, 20]");
  if (n == 0) throw Error(ErrorCode::Parameter, "horizon N must be positive");
  if (functions.size() != count())
    throw Error(ErrorCode::Parameter, "cube: k=" + std::to_string(k) + " needs " +
                                          std::to_string(count()) + " functions, got " +
                                          std::to_string(functions.size()));
  for (std::size_t j = 1; j <= count(); ++j) {
    const std::string what = "cube f" + std::to_string(j);
    require_length(functions[j - 1], required_length(j, n), what.c_str());
  }
}

namespace {

double int_power(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Sum over i_1..i_level with the higher indices folded into `offset`:
// offset[j-1] = sum_{l in e_j, l > level} i_l.
cplx nested_sum(const CubeSpec& spec, std::size_t n, int level, std::vector<std::size_t>& offset) {
  const std::size_t count = spec.count();
  std::vector<cplx> terms(n);
  if (level == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx prod = 1.0;
      for (std::size_t j = 1; j <= count; ++j)
        prod *= spec.functions[j - 1][offset[j - 1] + ((j & 1) ? i : 0)];
      terms[i] = prod;
    }
    return pairwise_sum(terms);
  }
  const std::size_t bit = std::size_t{1} << (level - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= count; ++j)
      if (j & bit) offset[j - 1] += i;
    terms[i] = nested_sum(spec, n, level - 1, offset);
    for (std::size_t j = 1; j <= count; ++j)
      if (j & bit) offset[j - 1] -= i;
  }
  return pairwise_sum(terms);
}

}  // namespace

cplx cubek_naive(const CubeSpec& spec, std::size_t n, NaiveOptions options) {
  spec.validate(n);
  if (!options.force) {
    if (spec.k > 4)
      throw Error(ErrorCode::CostGuard, "cubek_naive: k > 4 requires force");
    const double terms = int_power(static_cast<double>(n), spec.k);
    if (terms > options.term_budget)
      throw Error(ErrorCode::CostGuard, "cubek_naive: " + std::to_string(terms) +
                                            " terms exceed the budget of " +
                                            std::to_string(options.term_budget));
  }
  std::vector<std::size_t> offset(spec.count(), 0);
  return nested_sum(spec, n, spec.k, offset) / int_power(static_cast<double>(n), spec.k);
}

cplx cubek_fast(const CubeSpec& spec, std::size_t n) {
  spec.validate(n);
  const std::size_t count = spec.count();
  const int outer = spec.k - 2;
  std::size_t combos = 1;
  for (int i = 0; i < outer; ++i) combos *= n;

  std::vector<cplx> partial(combos);
  parallel_blocks(combos, [&](std::size_t begin, std::size_t end) {
    Convolver conv(n);
    std::vector<cplx> u(n), v(n), w(2 * n - 1);
    std::vector<std::size_t> rest(count + 1);
    for (std::size_t c = begin; c < end; ++c) {
      // Decode (i_3, ..., i_k) from the base-N digits of c.
      std::fill(rest.begin(), rest.end(), 0);
      std::size_t code = c;
      for (int l = 3; l <= spec.k; ++l) {
        const std::size_t idx = code % n;
        code /= n;
        const std::size_t bit = std::size_t{1} << (l - 1);
        for (std::size_t j = 1; j <= count; ++j)
          if (j & bit) rest[j] += idx;
      }
      cplx constant = 1.0;
      std::fill(u.begin(), u.end(), cplx{1.0});
      std::fill(v.begin(), v.end(), cplx{1.0});
      std::fill(w.begin(), w.end(), cplx{1.0});
      for (std::size_t j = 1; j <= count; ++j) {
        const Samples f = spec.functions[j - 1];
        const std::size_t r = rest[j];
        switch (j & 3) {
          case 0: constant *= f[r]; break;
          case 1: for (std::size_t i = 0; i < n; ++i) u[i] *= f[i + r]; break;
          case 2: for (std::size_t i = 0; i < n; ++i) v[i] *= f[i + r]; break;
          default: for (std::size_t s = 0; s < w.size(); ++s) w[s] *= f[s + r]; break;
        }
      }
      partial[c] = constant * conv.convolve_dot(u, v, w);
    }
  });
  return pairwise_sum(partial) / int_power(static_cast<double>(n), spec.k);
}

double lemma4_quantity(int k, const std::vector<Samples>& block, std::size_t n,
                       std::size_t oversample) {
  if (k < 3) throw Error(ErrorCode::Parameter, "lemma4_quantity: k must be at least 3");
  if (n == 0) throw Error(ErrorCode::Parameter, "lemma4_quantity: N must be positive");
  const int outer = k - 2;
  const std::size_t width = std::size_t{1} << outer;
  if (block.size() != width)
    throw Error(ErrorCode::Parameter, "lemma4_quantity: k=" + std::to_string(k) + " needs " +
                                          std::to_string(width) + " block functions");
  for (std::size_t d = 0; d < width; ++d) {
    const std::string what = "lemma4 g" + std::to_string(d);
    require_length(block[d], static_cast<std::size_t>(std::popcount(d)) * (n - 1) + n,
                   what.c_str());
  }
  std::size_t combos = 1;
  for (int i = 0; i < outer; ++i) combos *= n;

  std::vector<double> per_combo(combos);
  parallel_blocks(combos, [&](std::size_t begin, std::size_t end) {
    WWEvaluator eval(n, oversample);
    std::vector<cplx> inner(n);
    std::vector<std::size_t> shift(width);
    for (std::size_t c = begin; c < end; ++c) {
      std::fill(shift.begin(), shift.end(), 0);
      std::size_t code = c;
      for (int l = 0; l < outer; ++l) {
        const std::size_t idx = code % n;
        code /= n;
        for (std::size_t d = 0; d < width; ++d)
          if (d & (std::size_t{1} << l)) shift[d] += idx;
      }
      for (std::size_t m = 0; m < n; ++m) {
        cplx prod = 1.0;
        for (std::size_t d = 0; d < width; ++d) prod *= block[d][m + shift[d]];
        inner[m] = prod;
      }
      const double v = eval(inner).value;
      per_combo[c] = v * v;
    }
  });
  return pairwise_sum(std::span<const double>(per_combo)) / static_cast<double>(combos);
}

}  // namespace cubelab
