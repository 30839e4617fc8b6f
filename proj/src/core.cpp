#include "privleak/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace privleak {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

std::uint64_t RandomSource::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  return lo + uniform() * (hi - lo);
}

std::size_t RandomSource::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  return static_cast<std::size_t>(next_u64() % n);
}

double RandomSource::gaussian() {
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double RandomSource::laplace(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace: scale must be positive");
  double u = uniform();
  if (u < 0x1.0p-53) u = 0x1.0p-53;
  const double x = u - 0.5;
  // Inverse CDF: -b * sgn(x) * ln(1 - 2|x|).
  return (x < 0.0 ? scale : -scale) * std::log1p(-2.0 * std::fabs(x));
}

double RandomSource::gamma(double shape, double scale) {
  if (!(shape >= 1.0)) throw std::invalid_argument("gamma: shape must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("gamma: scale must be positive");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = gaussian();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (u < 0x1.0p-53) u = 0x1.0p-53;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

RandomSource RandomSource::derive(std::uint64_t label) const {
  return RandomSource(mix64(seed_ ^ mix64(label + kGamma)));
}

RandomSource RandomSource::derive(std::string_view label) const {
  return derive(stable_hash(label));
}

std::uint64_t stable_hash(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + kGamma));
}

Vec normalize_minmax(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("normalize_minmax: empty vector");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  Vec out(v.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) * inv;
  return out;
}

Vec laplace_sample(RandomSource& rng, double scale, std::size_t n) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace_sample: scale must be positive");
  Vec out(n);
  for (auto& x : out) x = rng.laplace(scale);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
  if (metric == Metric::euclidean) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  const double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("distance: cosine undefined for zero vector");
  }
  return 1.0 - dot(a, b) / (na * nb);
}

}  // namespace privleak
