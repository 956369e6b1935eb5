#pragma once

#include <array>
#include <cstddef>

#include "cubelab/common.hpp"
#include "cubelab/dynamics.hpp"

namespace cubelab {

enum class Factor { Kronecker, CL };

/// How a factor projection acts on an Observable.
enum class Rule {
  Identity,      // the factor is the whole system
  Integral,      // the factor is trivial: project to the constant integral
  AverageOverY,  // conditional expectation onto the x coordinate
};

struct FactorRules {
  Rule kronecker;
  Rule cl;
};

/// Known factor structure of the catalog systems:
///
///   Rotation         discrete spectrum; every L^2 function is Kronecker.
///   ProductRotation  same, characters e(kx + ly) are eigenfunctions.
///   Doubling         mixing, so both factors are trivial.
///   SkewProduct      Kronecker factor is the base rotation (functions of x);
///                    the CL factor is the whole system, since e(ly) is a
///                    quasi-eigenfunction with nonzero third-order seminorm.
///
/// Throws ErrorCode::NoFactorData for an ExternalSequence.
FactorRules factor_rules(SystemKind kind);

Observable apply_rule(Rule rule, const Observable& obs);

Observable project(const SystemSpec& system, const Observable& obs, Factor factor);

struct ComplexPair {
  cplx lhs;
  cplx rhs;
};

/// For an eigenfunction f3 with f3(T^s x) = e^{2 pi i s theta} f3(x):
///   lhs = cube3_naive(f1, f2, f3, N)
///   rhs = f3(x) ((1/N) sum_n f1_n e^{2 pi i n theta}) ((1/N) sum_m f2_m e^{2 pi i m theta})
/// `f3` is the eigenfunction's orbit (length >= 2N-1), `f3_value` = f3(x).
ComplexPair eigenfunction_identity_check(Samples f1, Samples f2, Samples f3, double theta,
                                         cplx f3_value, std::size_t n);

struct SidePair {
  double raw = 0.0;
  double projected = 0.0;
};

/// (1/N) sum_{n<N} |(1/N) sum_{m<N} a_m b_{n+m}|^2, one correlation
/// transform. Requires |a| >= N, |b| >= 2N-1.
double pair_correlation_energy(Samples a, Samples b, std::size_t n);

/// (1/N^2) sum_{n,p<N} |(1/N) sum_{m<N} f4(m) f5(n+m) f6(p+m) f7(p+n+m)|^2,
/// one correlation transform per n. Lengths: f4 >= N, f5, f6 >= 2N-1,
/// f7 >= 3N-2.
double quad_correlation_energy(const std::array<Samples, 4>& f, std::size_t n);

/// pair_correlation_energy on raw orbits and on Kronecker-projected orbits.
SidePair eq1_compare(const SystemSpec& system, const Observable& obs1, const Observable& obs2,
                     Point x0, std::size_t n);

/// quad_correlation_energy on raw orbits and on CL-projected orbits.
SidePair eq10_compare(const SystemSpec& system, const std::array<Observable, 4>& obs, Point x0,
                      std::size_t n);

}  // namespace cubelab
