#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cubelab/common.hpp"

namespace cubelab {

/// In-place complex DFT of a fixed length backed by FFTW.
///
/// forward():  X_k = sum_n x_n e^{-2 pi i k n / P}
/// backward(): x_n = sum_k X_k e^{+2 pi i k n / P}   (unnormalized)
///
/// A Transform owns its buffer and plans; it is movable, not copyable, and
/// must not be shared between threads. Plan creation is serialized
/// internally, so separate instances may be built and run concurrently.
class Transform {
 public:
  explicit Transform(std::size_t size);
  ~Transform();

  Transform(Transform&& other) noexcept;
  Transform& operator=(Transform&& other) noexcept;
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  std::size_t size() const noexcept { return size_; }
  std::span<cplx> data() noexcept { return {buffer_, size_}; }
  std::span<const cplx> data() const noexcept { return {buffer_, size_}; }

  /// Copies `input` to the front of the buffer and zero-fills the rest.
  void load(Samples input);

  void forward();
  void backward();

 private:
  void release() noexcept;

  std::size_t size_ = 0;
  cplx* buffer_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Scratch for repeated linear convolutions. The transform length is the
/// next power of two covering the full linear support; buffers grow on
/// demand and are reused across calls of equal or smaller size.
class Convolver {
 public:
  /// Pre-sized for convolving two sequences of length at most `max_len`.
  explicit Convolver(std::size_t max_len = 1);

  std::size_t capacity() const noexcept { return lhs_.size(); }

  /// Full linear convolution (a * b)_s for s < a.size() + b.size() - 1.
  /// The returned view aliases internal storage until the next call.
  std::span<const cplx> convolve(Samples a, Samples b);

  /// (a * b) dotted with w: sum_s (a * b)_s w_s over s < a.size() + b.size() - 1.
  cplx convolve_dot(Samples a, Samples b, Samples w);

  /// Correlation r_h = sum_{n < a.size()} a_n b_{n+h} for h in [0, lags).
  /// Requires b.size() >= a.size() + lags - 1.
  std::span<const cplx> correlate(Samples a, Samples b, std::size_t lags);

 private:
  void reserve(std::size_t support);

  Transform lhs_;
  Transform rhs_;
  std::vector<cplx> products_;
};

}  // namespace cubelab
