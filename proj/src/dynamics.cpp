#include "cubelab/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cubelab/rng.hpp"

namespace cubelab {

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Rotation: return "rotation";
    case SystemKind::Doubling: return "doubling";
    case SystemKind::SkewProduct: return "skew";
    case SystemKind::ProductRotation: return "product-rotation";
    case SystemKind::ExternalSequence: return "external";
  }
  return "unknown";
}

SystemKind parse_system_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "rotation") return SystemKind::Rotation;
  if (s == "doubling") return SystemKind::Doubling;
  if (s == "skew" || s == "skewproduct" || s == "skew-product") return SystemKind::SkewProduct;
  if (s == "product-rotation" || s == "productrotation") return SystemKind::ProductRotation;
  if (s == "external" || s == "externalsequence" || s == "external-sequence")
    return SystemKind::ExternalSequence;
  throw Error(ErrorCode::Validation, "kind: unknown system '" + std::string(name) + "'");
}

int dimension(SystemKind kind) {
  return (kind == SystemKind::SkewProduct || kind == SystemKind::ProductRotation) ? 2 : 1;
}

void SystemSpec::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!in_unit(alpha)) throw Error(ErrorCode::Validation, "alpha: must lie in [0,1)");
  if (!in_unit(theta)) throw Error(ErrorCode::Validation, "theta: must lie in [0,1)");
  if (kind == SystemKind::ExternalSequence) {
    if (path.empty()) throw Error(ErrorCode::Validation, "path: required for an external sequence");
    if (alpha != 0.0 || theta != 0.0)
      throw Error(ErrorCode::Validation, "alpha: an external sequence has no dynamical parameters");
  }
}

// ---------------------------------------------------------------------------
// Observable

Observable Observable::constant(cplx c) { return Observable{{Term{0, 0, c}}, std::nullopt, false}; }

Observable Observable::character(int k, int l) {
  return Observable{{Term{k, l, 1.0}}, std::nullopt, false};
}

Observable Observable::cosine(int k) {
  return Observable{{Term{k, 0, 0.5}, Term{-k, 0, 0.5}}, std::nullopt, false};
}

Observable Observable::interval(double a, double b) {
  return Observable{{}, Interval{a, b}, false};
}

cplx Observable::raw_integral() const {
  cplx total{};
  for (const Term& t : terms)
    if (t.k == 0 && t.l == 0) total += t.c;
  if (indicator) total += indicator->b - indicator->a;
  return total;
}

cplx Observable::evaluate(Point p) const {
  cplx v{};
  for (const Term& t : terms) {
    if (t.k == 0 && t.l == 0) {
      v += t.c;
    } else {
      v += t.c * unit_phase(t.k * p.x + t.l * p.y);
    }
  }
  if (indicator && p.x >= indicator->a && p.x < indicator->b) v += 1.0;
  if (mean_zero) v -= raw_integral();
  return v;
}

void Observable::validate_for(SystemKind kind) const {
  if (indicator) {
    const auto [a, b] = *indicator;
    if (!(a >= 0.0 && a < b && b <= 1.0))
      throw Error(ErrorCode::Validation, "indicator: need 0 <= a < b <= 1");
  }
  if (dimension(kind) == 1) {
    for (const Term& t : terms)
      if (t.l != 0)
        throw Error(ErrorCode::Validation,
                    "observable: y-modes are not defined on a one-dimensional system");
  }
}

cplx observable_integral(const Observable& obs) {
  return obs.mean_zero ? cplx{} : obs.raw_integral();
}

namespace {

class ObservableParser {
 public:
  explicit ObservableParser(std::string_view text) : text_(text) {}

  Observable parse() {
    skip_space();
    if (text_.substr(pos_).starts_with("mz:")) {
      obs_.mean_zero = true;
      pos_ += 3;
    }
    skip_space();
    double sign = 1.0;
    if (accept('-')) {
      sign = -1.0;
    } else {
      accept('+');
    }
    term(sign);
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) break;
      if (accept('+')) {
        term(1.0);
      } else if (accept('-')) {
        term(-1.0);
      } else {
        fail("expected '+' or '-'");
      }
    }
    if (obs_.terms.empty() && !obs_.indicator) fail("empty observable");
    return std::move(obs_);
  }

 private:
  void term(double sign) {
    skip_space();
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      atom(sign);
      return;
    }
    const double value = sign * number();
    skip_space();
    if (accept('*')) {
      skip_space();
      atom(value);
    } else {
      add(0, 0, value);
    }
  }

  void atom(double scale) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (!accept('(')) fail("expected '(' after " + name);
    std::vector<double> args;
    do {
      skip_space();
      args.push_back(number());
      skip_space();
    } while (accept(','));
    if (!accept(')')) fail("expected ')'");

    auto mode = [&](std::size_t i) {
      if (i >= args.size()) return 0;
      if (args[i] != std::floor(args[i])) fail(name + ": modes must be integers");
      return static_cast<int>(args[i]);
    };
    if (name == "ind") {
      if (args.size() != 2) fail("ind takes two arguments");
      if (scale != 1.0) fail("ind cannot be scaled");
      if (obs_.indicator) fail("at most one indicator");
      obs_.indicator = Interval{args[0], args[1]};
      return;
    }
    if (args.empty() || args.size() > 2) fail(name + " takes one or two modes");
    const int k = mode(0);
    const int l = mode(1);
    if (name == "e") {
      add(k, l, scale);
    } else if (name == "cos") {
      add(k, l, 0.5 * scale);
      add(-k, -l, 0.5 * scale);
    } else if (name == "sin") {
      add(k, l, cplx(0.0, -0.5 * scale));
      add(-k, -l, cplx(0.0, 0.5 * scale));
    } else {
      fail("unknown atom '" + name + "'");
    }
  }

  void add(int k, int l, cplx c) {
    for (Term& t : obs_.terms) {
      if (t.k == k && t.l == l) {
        t.c += c;
        return;
      }
    }
    obs_.terms.push_back(Term{k, l, c});
  }

  double number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "observable '" + std::string(text_) + "' at column " +
                                      std::to_string(pos_ + 1) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Observable obs_;
};

}  // namespace

Observable parse_observable(std::string_view text) { return ObservableParser(text).parse(); }

// ---------------------------------------------------------------------------
// Orbits

Orbit::Orbit(std::vector<cplx> samples, OrbitMeta meta)
    : samples_(std::move(samples)), sup_norm_(cubelab::sup_norm(samples_)), meta_(std::move(meta)) {}

namespace {

std::uint64_t window64(const std::vector<std::uint64_t>& words, std::size_t n) {
  const std::size_t q = n / 64;
  const unsigned r = static_cast<unsigned>(n % 64);
  if (r == 0) return words[q];
  return (words[q] << r) | (words[q + 1] >> (64 - r));
}

std::vector<std::uint64_t> stream_words(std::uint64_t seed, std::size_t bits) {
  SplitMix64 gen(seed);
  std::vector<std::uint64_t> words(bits / 64 + 2);
  for (auto& w : words) w = gen.next();
  return words;
}

double window_to_real(std::uint64_t w) { return static_cast<double>(w >> 11) * 0x1.0p-53; }

}  // namespace

double doubling_point(std::uint64_t seed, std::size_t n) {
  return window_to_real(window64(stream_words(seed, n + 64), n));
}

Point random_start(std::uint64_t seed) {
  SplitMix64 gen(SplitMix64::mix(seed ^ 0x5DEECE66DULL));
  const double x = gen.uniform();
  return {x, gen.uniform()};
}

std::vector<Point> orbit_points(const SystemSpec& system, Point x0, std::size_t length) {
  system.validate();
  std::vector<Point> pts(length);
  switch (system.kind) {
    case SystemKind::Rotation:
      for (std::size_t n = 0; n < length; ++n)
        pts[n].x = frac(x0.x + frac_product(n, system.alpha));
      break;
    case SystemKind::Doubling: {
      const auto words = stream_words(system.seed, length + 64);
      for (std::size_t n = 0; n < length; ++n) pts[n].x = window_to_real(window64(words, n));
      break;
    }
    case SystemKind::SkewProduct:
      for (std::size_t n = 0; n < length; ++n) {
        const std::uint64_t tri = n == 0 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
        pts[n].x = frac(x0.x + frac_product(n, system.alpha));
        pts[n].y = frac(x0.y + frac_product(n, x0.x) + frac_product(tri, system.alpha));
      }
      break;
    case SystemKind::ProductRotation:
      for (std::size_t n = 0; n < length; ++n) {
        pts[n].x = frac(x0.x + frac_product(n, system.alpha));
        pts[n].y = frac(x0.y + frac_product(n, system.theta));
      }
      break;
    case SystemKind::ExternalSequence:
      throw Error(ErrorCode::Parameter, "external sequences have no phase points");
  }
  return pts;
}

Orbit generate_orbit(const SystemSpec& system, const Observable& obs, Point x0,
                     std::size_t length) {
  if (length == 0) throw Error(ErrorCode::EmptyOrbit, "orbit length must be at least 1");
  system.validate();
  OrbitMeta meta{system, obs, x0, length};
  if (system.kind == SystemKind::ExternalSequence) {
    return Orbit(read_sequence_csv(system.path, length), std::move(meta));
  }
  obs.validate_for(system.kind);
  if (system.kind == SystemKind::Doubling) meta.start = Point{doubling_point(system.seed, 0), 0.0};
  const auto pts = orbit_points(system, x0, length);
  std::vector<cplx> samples(length);
  for (std::size_t n = 0; n < length; ++n) samples[n] = obs.evaluate(pts[n]);
  return Orbit(std::move(samples), std::move(meta));
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, ptr);
}

void write_orbit_csv(std::ostream& out, Samples samples) {
  out << "n,re,im\n";
  for (std::size_t n = 0; n < samples.size(); ++n)
    out << n << ',' << format_number(samples[n].real()) << ',' << format_number(samples[n].imag())
        << '\n';
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": bad number '" + cell + "'");
  return v;
}

}  // namespace

std::vector<cplx> read_sequence_csv(std::istream& in, std::size_t length) {
  std::string line;
  std::size_t line_no = 0;
  // Skips "# key: value" metadata as written by the orbit report.
  auto next_line = [&] {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.starts_with('#')) return true;
    }
    return false;
  };
  if (!next_line()) throw Error(ErrorCode::Parse, "line " + std::to_string(line_no + 1) + ": missing header");
  const std::size_t header_line = line_no;
  const auto header = split_row(line);
  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw Error(ErrorCode::Parse, "line " + std::to_string(header_line) + ": header lacks a '" +
                                        std::string(name) + "' column");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t re_col = column("re");
  const std::size_t im_col = column("im");

  std::vector<cplx> out;
  out.reserve(length);
  while (out.size() < length && next_line()) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_row(line);
    if (cells.size() <= std::max(re_col, im_col))
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": too few columns");
    out.emplace_back(parse_cell(cells[re_col], line_no), parse_cell(cells[im_col], line_no));
  }
  if (out.size() < length)
    throw Error(ErrorCode::InsufficientData, "external sequence has " + std::to_string(out.size()) +
                                                 " samples, need " + std::to_string(length));
  return out;
}

std::vector<cplx> read_sequence_csv(const std::string& path, std::size_t length) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InsufficientData, "cannot open external sequence '" + path + "'");
  return read_sequence_csv(in, length);
}

}  // namespace cubelab
