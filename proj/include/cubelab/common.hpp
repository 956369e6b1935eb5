#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubelab {

using cplx = std::complex<double>;

/// Read-only view over a complex sample sequence. Orbits, shifted
/// products and raw test vectors are all consumed through this type.
using Samples = std::span<const cplx>;

enum class ErrorCode {
  EmptyOrbit,
  InsufficientData,
  Length,
  Window,
  Parameter,
  CostGuard,
  NoFactorData,
  Parse,
  Validation,
  SelfCheck,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Throws ErrorCode::Length unless `s` holds at least `need` samples.
void require_length(Samples s, std::size_t need, const char* what);

/// Tree summation; error grows as O(log n) instead of O(n).
cplx pairwise_sum(std::span<const cplx> terms);
double pairwise_sum(std::span<const double> terms);

/// max_n |s[n]| over the first `n` samples (all samples when n is npos).
double sup_norm(Samples s, std::size_t n = static_cast<std::size_t>(-1));

std::size_t next_pow2(std::size_t n);

/// e^{2 pi i turns}. Quarter turns are reduced exactly, so multiples of 1/4
/// produce exact values of +-1 and +-i.
cplx unit_phase(double turns);

/// Fractional part in [0, 1).
double frac(double x);

/// frac(a * b) for an integer `a` below 2^53, using an error-free product so
/// that the result does not lose precision as `a` grows.
double frac_product(std::uint64_t a, double b);

}  // namespace cubelab
