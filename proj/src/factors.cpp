#include "cubelab/factors.hpp"

#include <algorithm>

#include "cubelab/cube_averages.hpp"
#include "cubelab/fft.hpp"
#include "cubelab/parallel.hpp"

namespace cubelab {

FactorRules factor_rules(SystemKind kind) {
  switch (kind) {
    case SystemKind::Rotation: return {Rule::Identity, Rule::Identity};
    case SystemKind::ProductRotation: return {Rule::Identity, Rule::Identity};
    case SystemKind::Doubling: return {Rule::Integral, Rule::Integral};
    case SystemKind::SkewProduct: return {Rule::AverageOverY, Rule::Identity};
    case SystemKind::ExternalSequence: break;
  }
  throw Error(ErrorCode::NoFactorData, "no factor data for system '" +
                                           std::string(to_string(kind)) + "'");
}

Observable apply_rule(Rule rule, const Observable& obs) {
  switch (rule) {
    case Rule::Identity: return obs;
    case Rule::Integral: return Observable::constant(observable_integral(obs));
    case Rule::AverageOverY: {
      Observable out = obs;
      std::erase_if(out.terms, [](const Term& t) { return t.l != 0; });
      return out;
    }
  }
  return obs;
}

Observable project(const SystemSpec& system, const Observable& obs, Factor factor) {
  const FactorRules rules = factor_rules(system.kind);
  return apply_rule(factor == Factor::Kronecker ? rules.kronecker : rules.cl, obs);
}

ComplexPair eigenfunction_identity_check(Samples f1, Samples f2, Samples f3, double theta,
                                         cplx f3_value, std::size_t n) {
  const cplx lhs = cube3_naive(f1, f2, f3, n);
  std::vector<cplx> t1(n), t2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx phase = unit_phase(frac_product(i, theta));
    t1[i] = f1[i] * phase;
    t2[i] = f2[i] * phase;
  }
  const double nd = static_cast<double>(n);
  const cplx rhs = f3_value * (pairwise_sum(t1) / nd) * (pairwise_sum(t2) / nd);
  return {lhs, rhs};
}

double pair_correlation_energy(Samples a, Samples b, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::Parameter, "horizon N must be positive");
  require_length(a, n, "eq1 f1");
  require_length(b, 2 * n - 1, "eq1 f2");
  Convolver conv(2 * n);
  const auto r = conv.correlate(a.first(n), b, n);
  const double nd = static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = std::norm(r[i] / nd);
  return pairwise_sum(std::span<const double>(sq)) / nd;
}

double quad_correlation_energy(const std::array<Samples, 4>& f, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::Parameter, "horizon N must be positive");
  const auto& [f4, f5, f6, f7] = f;
  require_length(f4, n, "eq10 f4");
  require_length(f5, 2 * n - 1, "eq10 f5");
  require_length(f6, 2 * n - 1, "eq10 f6");
  require_length(f7, 3 * n - 2, "eq10 f7");
  const double nd = static_cast<double>(n);
  std::vector<double> per_shift(n);
  parallel_blocks(n, [&](std::size_t begin, std::size_t end) {
    Convolver conv(2 * n);
    std::vector<cplx> u(n), w(2 * n - 1);
    std::vector<double> sq(n);
    for (std::size_t shift = begin; shift < end; ++shift) {
      for (std::size_t m = 0; m < n; ++m) u[m] = f4[m] * f5[shift + m];
      for (std::size_t q = 0; q < w.size(); ++q) w[q] = f6[q] * f7[q + shift];
      const auto r = conv.correlate(u, w, n);
      for (std::size_t p = 0; p < n; ++p) sq[p] = std::norm(r[p] / nd);
      per_shift[shift] = pairwise_sum(std::span<const double>(sq));
    }
  });
  return pairwise_sum(std::span<const double>(per_shift)) / (nd * nd);
}

SidePair eq1_compare(const SystemSpec& system, const Observable& obs1, const Observable& obs2,
                     Point x0, std::size_t n) {
  const Observable p1 = project(system, obs1, Factor::Kronecker);
  const Observable p2 = project(system, obs2, Factor::Kronecker);
  if (n == 0) throw Error(ErrorCode::Parameter, "horizon N must be positive");
  const std::size_t len = 2 * n - 1;
  const Orbit a = generate_orbit(system, obs1, x0, len);
  const Orbit b = generate_orbit(system, obs2, x0, len);
  const Orbit pa = generate_orbit(system, p1, x0, len);
  const Orbit pb = generate_orbit(system, p2, x0, len);
  return {pair_correlation_energy(a, b, n), pair_correlation_energy(pa, pb, n)};
}

SidePair eq10_compare(const SystemSpec& system, const std::array<Observable, 4>& obs, Point x0,
                      std::size_t n) {
  if (n == 0) throw Error(ErrorCode::Parameter, "horizon N must be positive");
  std::array<Observable, 4> projected;
  for (std::size_t i = 0; i < 4; ++i) projected[i] = project(system, obs[i], Factor::CL);
  const std::size_t len = 3 * n - 2;
  std::vector<Orbit> raw, proj;
  for (std::size_t i = 0; i < 4; ++i) {
    raw.push_back(generate_orbit(system, obs[i], x0, len));
    proj.push_back(generate_orbit(system, projected[i], x0, len));
  }
  return {quad_correlation_energy({raw[0], raw[1], raw[2], raw[3]}, n),
          quad_correlation_energy({proj[0], proj[1], proj[2], proj[3]}, n)};
}

}  // namespace cubelab
