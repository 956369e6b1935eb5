#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubelab/common.hpp"

namespace cubelab {

enum class SystemKind { Rotation, Doubling, SkewProduct, ProductRotation, ExternalSequence };

std::string_view to_string(SystemKind kind);
SystemKind parse_system_kind(std::string_view name);

/// Number of coordinates of the phase space (1 or 2). ExternalSequence
/// reports 1; its start point is ignored.
int dimension(SystemKind kind);

/// A catalog measure-preserving system.
///
///   Rotation         x -> x + alpha                     on [0,1)
///   Doubling         x -> 2x                            on [0,1)
///   SkewProduct      (x, y) -> (x + alpha, x + y)       on [0,1)^2
///   ProductRotation  (x, y) -> (x + alpha, y + theta)   on [0,1)^2
///   ExternalSequence samples read from a CSV file at `path`
struct SystemSpec {
  SystemKind kind = SystemKind::Rotation;
  double alpha = 0.0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::string path;

  /// Throws ErrorCode::Validation when an angle leaves [0, 1) or an
  /// ExternalSequence has no path.
  void validate() const;

  bool operator==(const SystemSpec&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// c * e^{2 pi i (k x + l y)}
struct Term {
  int k = 0;
  int l = 0;
  cplx c{};
  bool operator==(const Term&) const = default;
};

/// Half-open interval [a, b) on the x coordinate.
struct Interval {
  double a = 0.0;
  double b = 1.0;
  bool operator==(const Interval&) const = default;
};

/// Finite trigonometric polynomial plus an optional interval indicator.
/// With `mean_zero` set, the symbolic integral is subtracted at evaluation.
struct Observable {
  std::vector<Term> terms;
  std::optional<Interval> indicator;
  bool mean_zero = false;

  static Observable constant(cplx c);
  /// e^{2 pi i (k x + l y)}
  static Observable character(int k, int l = 0);
  /// cos(2 pi k x)
  static Observable cosine(int k);
  static Observable interval(double a, double b);

  /// Value at a phase point, including the mean-zero correction.
  cplx evaluate(Point p) const;

  /// Integral ignoring the mean_zero flag: c_00 + (b - a).
  cplx raw_integral() const;

  /// Throws ErrorCode::Validation on malformed indicators, or on y-modes
  /// when the target system is one-dimensional.
  void validate_for(SystemKind kind) const;

  bool operator==(const Observable&) const = default;
};

/// Exact symbolic integral: c_00 + (b - a), or exactly 0 when mean_zero.
cplx observable_integral(const Observable& obs);

/// Parses the compact textual form used on the command line, e.g.
///   "cos(1)", "e(1)", "e(0,1) + e(1)", "2 + 0.5*sin(3)", "ind(0.25,0.75)",
///   "mz: cos(1) + cos(2)"  (the "mz:" prefix sets mean_zero).
/// Atoms: e(k[,l]), cos(k[,l]), sin(k[,l]), ind(a,b), and real constants.
/// Terms are joined with '+' or '-'; an optional real factor precedes an
/// atom with '*'. Throws ErrorCode::Parse.
Observable parse_observable(std::string_view text);

struct OrbitMeta {
  SystemSpec system;
  Observable observable;
  Point start;
  std::size_t length = 0;
};

/// Immutable sample sequence a_n = f(T^n x0), n < L.
class Orbit {
 public:
  Orbit(std::vector<cplx> samples, OrbitMeta meta);

  Samples samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sup_norm() const noexcept { return sup_norm_; }
  const OrbitMeta& meta() const noexcept { return meta_; }
  cplx operator[](std::size_t n) const { return samples_[n]; }

  operator Samples() const noexcept { return samples_; }

 private:
  std::vector<cplx> samples_;
  double sup_norm_ = 0.0;
  OrbitMeta meta_;
};

/// Phase points T^n x0 for n < L (for Doubling the seed replaces x0).
/// Rotation coordinates are computed per index as frac(x0 + n*alpha) with an
/// error-free product; the skew product uses the closed form
/// y_n = y0 + n*x0 + n(n-1)/2*alpha (mod 1).
std::vector<Point> orbit_points(const SystemSpec& system, Point x0, std::size_t length);

/// x_n of the doubling map: the 64-bit window starting at bit n of the
/// seed's bit stream (SplitMix64 words, most significant bit first), rounded
/// down to 53 bits.
double doubling_point(std::uint64_t seed, std::size_t n);

/// Start point drawn from the seed (used when no x0 is supplied).
Point random_start(std::uint64_t seed);

/// Throws ErrorCode::EmptyOrbit for L = 0 and ErrorCode::InsufficientData
/// when an external sequence is shorter than L.
Orbit generate_orbit(const SystemSpec& system, const Observable& obs, Point x0,
                     std::size_t length);

/// Orbit CSV: header "n,re,im", one row per sample.
void write_orbit_csv(std::ostream& out, Samples samples);

/// Reads the first `length` samples from a CSV whose header names "re" and
/// "im" columns. Throws ErrorCode::Parse or ErrorCode::InsufficientData.
std::vector<cplx> read_sequence_csv(const std::string& path, std::size_t length);
std::vector<cplx> read_sequence_csv(std::istream& in, std::size_t length);

/// Shortest round-trip scientific form (17 significant digits).
std::string format_number(double v);

}  // namespace cubelab
