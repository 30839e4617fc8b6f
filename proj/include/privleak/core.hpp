#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace privleak {

using Vec = std::vector<double>;

/// Deterministic splittable random source (splitmix64 core).
///
/// Two properties the rest of the library relies on:
///  - the same seed always yields the same sample stream, and
///  - derive() children are keyed off the construction seed, not the
///    current state, so sibling sub-streams are independent of each
///    other's consumption order.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Next raw 64-bit word.
  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal via Box-Muller (two uniforms per sample).
  double gaussian();

  /// Laplace(0, b) via inverse CDF of a single uniform draw.
  double laplace(double scale);

  /// Gamma(shape, scale) via Marsaglia-Tsang squeeze; shape >= 1.
  double gamma(double shape, double scale);

  /// Child stream keyed by (construction seed, label).
  RandomSource derive(std::uint64_t label) const;
  RandomSource derive(std::string_view label) const;

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

/// Stable 64-bit hash for seed derivation (FNV-1a over bytes).
std::uint64_t stable_hash(std::string_view bytes);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

/// Per-vector min-max rescale onto [0,1]. A constant vector maps to
/// all 0.5 (midpoint) so downstream noise scales stay bounded.
Vec normalize_minmax(std::span<const double> v);

/// n i.i.d. Laplace(0, scale) samples. Throws std::invalid_argument on
/// scale <= 0.
Vec laplace_sample(RandomSource& rng, double scale, std::size_t n);

enum class Metric { euclidean, cosine_distance };

/// Euclidean: ||a-b||_2. Cosine distance: 1 - a.b/(|a||b|), which
/// rejects all-zero inputs. Dims must match.
double distance(std::span<const double> a, std::span<const double> b,
                Metric metric);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

}  // namespace privleak
