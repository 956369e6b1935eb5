#include "cubelab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "cubelab/parallel.hpp"

namespace cubelab {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::vector<cplx> conjugated(Samples a, std::size_t len) {
  std::vector<cplx> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = std::conj(a[i]);
  return out;
}

std::size_t checked_grid(std::size_t n, std::size_t oversample) {
  if (n == 0) throw Error(ErrorCode::Parameter, "ww_sup: N must be positive");
  if (oversample < 2 || !is_pow2(oversample))
    throw Error(ErrorCode::Parameter, "ww_sup: oversample must be a power of two >= 2");
  return oversample * next_pow2(n);
}

}  // namespace

WWEvaluator::WWEvaluator(std::size_t n, std::size_t oversample)
    : n_(n), oversample_(oversample), transform_(checked_grid(n, oversample)) {}

WWStatistic WWEvaluator::operator()(Samples a) {
  require_length(a, n_, "ww_sup");
  transform_.load(a.first(n_));
  transform_.backward();
  const auto s = transform_.data();
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double v = std::abs(s[j]);
    if (v > best_abs) {
      best_abs = v;
      best = j;
    }
  }
  return WWStatistic{best_abs / static_cast<double>(n_), n_, oversample_,
                     static_cast<double>(best) / static_cast<double>(s.size())};
}

WWStatistic ww_sup(Samples a, std::size_t n, std::size_t oversample) {
  WWEvaluator eval(n, oversample);
  return eval(a);
}

cplx correlation(Samples a, std::size_t h, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::Parameter, "correlation: N must be positive");
  require_length(a, n + h, "correlation");
  std::vector<cplx> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = a[i] * std::conj(a[i + h]);
  return pairwise_sum(terms) / static_cast<double>(n);
}

std::vector<cplx> correlations(Samples a, std::size_t n, std::size_t lags) {
  if (n == 0) throw Error(ErrorCode::Parameter, "correlations: N must be positive");
  if (lags == 0) return {};
  require_length(a, n + lags - 1, "correlations");
  const auto conj_a = conjugated(a, n + lags - 1);
  Convolver conv(n + lags);
  const auto r = conv.correlate(a.first(n), conj_a, lags);
  std::vector<cplx> out(r.begin(), r.end());
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

namespace {

double seminorm2_fourth(Samples a, std::size_t n, std::size_t h) {
  const auto r = correlations(a, n, h);
  std::vector<double> sq(h);
  for (std::size_t i = 0; i < h; ++i) sq[i] = std::norm(r[i]);
  return pairwise_sum(std::span<const double>(sq)) / static_cast<double>(h);
}

}  // namespace

SeminormEstimate seminorm2(Samples a, std::size_t n, std::size_t h) {
  if (n == 0 || h == 0) throw Error(ErrorCode::Parameter, "seminorm2: N and H must be positive");
  require_length(a, n + h, "seminorm2");
  return SeminormEstimate{2, std::pow(seminorm2_fourth(a, n, h), 0.25), h, h, n, {}};
}

SeminormEstimate seminorm3(Samples a, std::size_t n, std::size_t h_outer, std::size_t h_inner) {
  if (n == 0 || h_outer == 0 || h_inner == 0)
    throw Error(ErrorCode::Parameter, "seminorm3: N and H must be positive");
  require_length(a, n + h_inner + h_outer, "seminorm3");
  const std::size_t len = n + h_inner;
  std::vector<double> fourth(h_outer);
  parallel_blocks(h_outer, [&](std::size_t begin, std::size_t end) {
    std::vector<cplx> d(len);
    for (std::size_t h = begin; h < end; ++h) {
      for (std::size_t i = 0; i < len; ++i) d[i] = a[i] * std::conj(a[i + h]);
      fourth[h] = seminorm2_fourth(d, n, h_inner);
    }
  });
  const double mean = pairwise_sum(std::span<const double>(fourth)) / static_cast<double>(h_outer);
  return SeminormEstimate{3, std::pow(mean, 0.125), h_outer, h_inner, n, {}};
}

BoundPair vdc_bound(Samples u, std::size_t n, std::size_t h) {
  if (h < 1 || h >= n) throw Error(ErrorCode::Parameter, "vdc_bound: need 1 <= H < N");
  require_length(u, n, "vdc_bound");
  const double nd = static_cast<double>(n);
  const double hd = static_cast<double>(h);

  const cplx mean = pairwise_sum(u.first(n)) / nd;
  std::vector<double> energy(n);
  for (std::size_t i = 0; i < n; ++i) energy[i] = std::norm(u[i]);

  std::vector<double> lagged(h);
  std::vector<cplx> terms;
  for (std::size_t lag = 1; lag <= h; ++lag) {
    terms.resize(n - lag);
    for (std::size_t i = 0; i + lag < n; ++i) terms[i] = u[i] * std::conj(u[i + lag]);
    lagged[lag - 1] = (1.0 - static_cast<double>(lag) / (hd + 1.0)) * std::abs(pairwise_sum(terms));
  }

  const double coef = (nd + hd) / (nd * nd * (hd + 1.0));
  return BoundPair{std::norm(mean),
                   coef * pairwise_sum(std::span<const double>(energy)) +
                       2.0 * coef * pairwise_sum(std::span<const double>(lagged))};
}

Lemma2Result lemma2_check(Samples a, std::size_t n, std::size_t h) {
  if (n == 0 || h == 0) throw Error(ErrorCode::Parameter, "lemma2_check: N and H must be positive");
  require_length(a, n + h, "lemma2_check");
  const double sup = ww_sup(a, n, 8).value;
  const auto r = correlations(a, n, h + 1);
  std::vector<double> mags(h);
  for (std::size_t lag = 1; lag <= h; ++lag) mags[lag - 1] = std::abs(r[lag]);
  const double hd = static_cast<double>(h);
  const double rhs =
      kLemma2Constant * (1.0 / hd + pairwise_sum(std::span<const double>(mags)) / hd);
  const double lhs = sup * sup;
  return Lemma2Result{lhs, rhs, lhs > rhs};
}

double lemma3_quantity(Samples a, Samples b, std::size_t n, std::size_t oversample) {
  if (n == 0) throw Error(ErrorCode::Parameter, "lemma3_quantity: N must be positive");
  require_length(a, n, "lemma3_quantity a");
  require_length(b, 2 * n - 1, "lemma3_quantity b");
  std::vector<double> per_shift(n);
  parallel_blocks(n, [&](std::size_t begin, std::size_t end) {
    WWEvaluator eval(n, oversample);
    std::vector<cplx> inner(n);
    for (std::size_t shift = begin; shift < end; ++shift) {
      for (std::size_t m = 0; m < n; ++m) inner[m] = a[m] * b[shift + m];
      const double v = eval(inner).value;
      per_shift[shift] = v * v;
    }
  });
  return pairwise_sum(std::span<const double>(per_shift)) / static_cast<double>(n);
}

}  // namespace cubelab
