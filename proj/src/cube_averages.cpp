#include "cubelab/cube_averages.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cubelab/dynamics.hpp"
#include "cubelab/fft.hpp"
#include "cubelab/parallel.hpp"

namespace cubelab {

namespace {

void require_horizon(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::Parameter, "horizon N must be positive");
}

void check_cube3(Samples a, Samples b, Samples c, std::size_t n) {
  require_horizon(n);
  require_length(a, n, "cube3 a");
  require_length(b, n, "cube3 b");
  require_length(c, 2 * n - 1, "cube3 c");
}

void check_cube7(const Seven& f, std::size_t n) {
  require_horizon(n);
  static constexpr int kWeight[7] = {1, 1, 2, 1, 2, 2, 3};
  for (std::size_t j = 0; j < 7; ++j) {
    const std::string what = "cube7 f" + std::to_string(j + 1);
    require_length(f[j], kWeight[j] * (n - 1) + 1, what.c_str());
  }
}

}  // namespace

cplx cube3_naive(Samples a, Samples b, Samples c, std::size_t n) {
  check_cube3(a, b, c, n);
  std::vector<cplx> diag(2 * n - 1);
  std::vector<cplx> pairs;
  pairs.reserve(n / 2 + 1);
  for (std::size_t s = 0; s + 1 < 2 * n; ++s) {
    const std::size_t lo = s >= n ? s - (n - 1) : 0;
    pairs.clear();
    for (std::size_t i = lo; 2 * i <= s; ++i) {
      const std::size_t j = s - i;
      if (i == j) {
        pairs.push_back(a[i] * b[i]);
      } else {
        pairs.push_back(a[i] * b[j] + a[j] * b[i]);
      }
    }
    diag[s] = pairwise_sum(pairs) * c[s];
  }
  const double nn = static_cast<double>(n);
  return pairwise_sum(diag) / (nn * nn);
}

cplx cube3_fast(Samples a, Samples b, Samples c, std::size_t n) {
  check_cube3(a, b, c, n);
  Convolver conv(n);
  const double nn = static_cast<double>(n);
  return conv.convolve_dot(a.first(n), b.first(n), c) / (nn * nn);
}

cplx cube7_naive(const Seven& f, std::size_t n) {
  check_cube7(f, n);
  const auto& [f1, f2, f3, f4, f5, f6, f7] = f;
  std::vector<cplx> over_p(n), over_n(n), over_m(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t nn = 0; nn < n; ++nn) {
      for (std::size_t m = 0; m < n; ++m) {
        over_m[m] = f1[m] * f2[nn] * f3[m + nn] * f4[p] * f5[m + p] * f6[nn + p] * f7[m + nn + p];
      }
      over_n[nn] = pairwise_sum(over_m);
    }
    over_p[p] = pairwise_sum(over_n);
  }
  const double nd = static_cast<double>(n);
  return pairwise_sum(over_p) / (nd * nd * nd);
}

cplx cube7_fast(const Seven& f, std::size_t n) {
  check_cube7(f, n);
  const auto& [f1, f2, f3, f4, f5, f6, f7] = f;
  std::vector<cplx> over_p(n);
  parallel_blocks(n, [&](std::size_t begin, std::size_t end) {
    Convolver conv(n);
    std::vector<cplx> u(n), v(n), w(2 * n - 1);
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t m = 0; m < n; ++m) {
        u[m] = f1[m] * f5[m + p];
        v[m] = f2[m] * f6[m + p];
      }
      for (std::size_t s = 0; s < w.size(); ++s) w[s] = f3[s] * f7[s + p];
      over_p[p] = f4[p] * conv.convolve_dot(u, v, w);
    }
  });
  const double nd = static_cast<double>(n);
  return pairwise_sum(over_p) / (nd * nd * nd);
}

cplx windowed_cube3(Samples a, Samples b, Samples c, std::size_t first, std::size_t last) {
  if (first >= last)
    throw Error(ErrorCode::Window, "window needs M < N (got M=" + std::to_string(first) +
                                       ", N=" + std::to_string(last) + ")");
  require_length(a, last + 1, "windowed a");
  require_length(b, last + 1, "windowed b");
  require_length(c, 2 * last + 1, "windowed c");
  return cube3_naive(a.subspan(first), b.subspan(first), c.subspan(2 * first), last - first + 1);
}

double relative_error(cplx x, cplx y, double floor) {
  return std::abs(x - y) / std::max(std::abs(y), floor);
}

void write_trace_csv(std::ostream& out, const AverageTrace& t) {
  out << "N,re,im,abs\n";
  for (std::size_t j = 0; j < t.horizons.size(); ++j) {
    out << t.horizons[j] << ',' << format_number(t.values[j].real()) << ','
        << format_number(t.values[j].imag()) << ',' << format_number(std::abs(t.values[j])) << '\n';
  }
}

bool decreasing_trend(const AverageTrace& t) {
  const std::size_t n = t.horizons.size();
  if (n < 2) return false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = std::log(static_cast<double>(t.horizons[j]));
    const double y = std::log(std::max(std::abs(t.values[j]), 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nd = static_cast<double>(n);
  const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
  return slope < 0.0 && std::abs(t.values.back()) < std::abs(t.values.front());
}

}  // namespace cubelab
