#include "cubelab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

namespace cubelab {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Transform::Transform(std::size_t size) : size_(size) {
  if (size == 0) throw Error(ErrorCode::Parameter, "transform size must be positive");
  std::lock_guard lock(planner_mutex());
  buffer_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * size));
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  const int n = static_cast<int>(size);
  forward_plan_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Transform::~Transform() { release(); }

Transform::Transform(Transform&& other) noexcept
    : size_(std::exchange(other.size_, 0)),
      buffer_(std::exchange(other.buffer_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Transform& Transform::operator=(Transform&& other) noexcept {
  if (this != &other) {
    release();
    size_ = std::exchange(other.size_, 0);
    buffer_ = std::exchange(other.buffer_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void Transform::release() noexcept {
  if (buffer_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
  buffer_ = nullptr;
}

void Transform::load(Samples input) {
  const std::size_t n = std::min(input.size(), size_);
  std::copy_n(input.begin(), n, buffer_);
  std::fill(buffer_ + n, buffer_ + size_, cplx{});
}

void Transform::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void Transform::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

Convolver::Convolver(std::size_t max_len)
    : lhs_(next_pow2(2 * std::max<std::size_t>(max_len, 1) - 1)),
      rhs_(lhs_.size()) {}

void Convolver::reserve(std::size_t support) {
  const std::size_t p = next_pow2(support);
  if (p <= lhs_.size()) return;
  lhs_ = Transform(p);
  rhs_ = Transform(p);
}

std::span<const cplx> Convolver::convolve(Samples a, Samples b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t support = a.size() + b.size() - 1;
  reserve(support);
  lhs_.load(a);
  rhs_.load(b);
  lhs_.forward();
  rhs_.forward();
  auto x = lhs_.data();
  auto y = rhs_.data();
  const double scale = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i] * scale;
  lhs_.backward();
  return lhs_.data().first(support);
}

cplx Convolver::convolve_dot(Samples a, Samples b, Samples w) {
  const auto conv = convolve(a, b);
  require_length(w, conv.size(), "convolve_dot weight");
  products_.resize(conv.size());
  for (std::size_t s = 0; s < conv.size(); ++s) products_[s] = conv[s] * w[s];
  return pairwise_sum(products_);
}

std::span<const cplx> Convolver::correlate(Samples a, Samples b, std::size_t lags) {
  if (a.empty() || lags == 0) return {};
  const std::size_t len_a = a.size();
  require_length(b, len_a + lags - 1, "correlate");
  const Samples bb = b.first(len_a + lags - 1);
  reserve(len_a + bb.size() - 1);
  // r_h = (reverse(a) * b)_{h + len_a - 1}
  auto x = lhs_.data();
  std::fill(x.begin(), x.end(), cplx{});
  for (std::size_t j = 0; j < len_a; ++j) x[j] = a[len_a - 1 - j];
  rhs_.load(bb);
  lhs_.forward();
  rhs_.forward();
  auto y = rhs_.data();
  const double scale = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i] * scale;
  lhs_.backward();
  return lhs_.data().subspan(len_a - 1, lags);
}

}  // namespace cubelab
