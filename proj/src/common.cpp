#include "cubelab/common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cubelab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyOrbit: return "empty-orbit";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::Length: return "length";
    case ErrorCode::Window: return "window";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::CostGuard: return "cost-guard";
    case ErrorCode::NoFactorData: return "no-factor-data";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::SelfCheck: return "self-check";
  }
  return "unknown";
}

void require_length(Samples s, std::size_t need, const char* what) {
  if (s.size() < need) {
    throw Error(ErrorCode::Length, std::string(what) + ": need " + std::to_string(need) +
                                       " samples, have " + std::to_string(s.size()));
  }
}

namespace {

template <typename T>
T tree_sum(std::span<const T> terms) {
  // Blocks of 8 are summed left to right; the recursion above them halves.
  if (terms.size() <= 8) {
    T acc{};
    for (const T& t : terms) acc += t;
    return acc;
  }
  const std::size_t half = terms.size() / 2;
  return tree_sum(terms.first(half)) + tree_sum(terms.subspan(half));
}

}  // namespace

cplx pairwise_sum(std::span<const cplx> terms) { return tree_sum(terms); }
double pairwise_sum(std::span<const double> terms) { return tree_sum(terms); }

double sup_norm(Samples s, std::size_t n) {
  n = std::min(n, s.size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(s[i]));
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

double frac_product(std::uint64_t a, double b) {
  const double ad = static_cast<double>(a);
  const double hi = ad * b;
  const double lo = std::fma(ad, b, -hi);
  return frac(frac(hi) + lo);
}

cplx unit_phase(double turns) {
  const double r = 4.0 * frac(turns);
  const double q = std::nearbyint(r);
  const double angle = (r - q) * (std::numbers::pi / 2.0);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  switch (static_cast<int>(q) & 3) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

}  // namespace cubelab
