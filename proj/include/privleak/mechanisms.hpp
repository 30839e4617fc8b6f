#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "privleak/core.hpp"

namespace privleak {

struct PrivacyParams {
  double epsilon = 0.1;
  double sensitivity = 1.0;  // after per-vector min-max normalization

  void validate() const;
};

/// Word -> vector table for the noisy nearest-neighbour swap mechanism.
/// Entry order is significant: nearest-word ties break to the lower index.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> words, std::vector<Vec> vectors);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t i) const { return words_[i]; }
  const Vec& vector(std::size_t i) const { return vectors_[i]; }
  /// Index of a word, or -1 when absent.
  long index_of(const std::string& word) const;

  /// Text format: header "dim <m> count <n>", then one entry per line,
  /// "word<TAB>v1 v2 ... vm".
  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::string> words_;
  std::vector<Vec> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
};

/// Exact nearest-neighbour index over a vocabulary (vantage-point tree,
/// Euclidean metric). Returns the same entry as an exhaustive scan,
/// including the lowest-index tie rule.
class VpTreeIndex {
 public:
  explicit VpTreeIndex(const Vocabulary& vocab, std::uint64_t build_seed = 1);
  std::size_t nearest(std::span<const double> query) const;

 private:
  struct Node {
    std::size_t item = 0;
    double radius = 0;
    int inner = -1;
    int outer = -1;
  };
  double dist(std::size_t item, std::span<const double> q) const;
  int build(std::vector<std::size_t>& items, std::size_t lo, std::size_t hi,
            RandomSource& rng);
  void search(int node, std::span<const double> q, std::size_t& best,
              double& best_d) const;

  const Vocabulary* vocab_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Min-max normalize, then add i.i.d. Laplace(0, sensitivity/epsilon)
/// noise per component. The output is not re-clamped to [0,1].
Vec ldp_perturb(std::span<const double> v, const PrivacyParams& p,
                RandomSource& rng);

/// Noise vector u*l with u a uniformly random unit direction in m dims
/// and l ~ Gamma(shape=m, scale=1/epsilon).
Vec mdp_noise(RandomSource& rng, std::size_t m, double epsilon);

/// Index of the vocabulary entry closest to v in Euclidean distance;
/// exhaustive scan, ties break to the lower index.
std::size_t nearest_index(std::span<const double> v, const Vocabulary& vocab);
const std::string& nearest_word(std::span<const double> v, const Vocabulary& vocab);

struct MdpResult {
  std::vector<std::string> words;
  std::size_t oov_count = 0;
  std::size_t self_swaps = 0;  // in-vocabulary words mapped back to themselves
};

/// Per word: look up its vector, perturb with mdp_noise, swap for the
/// nearest vocabulary word. Out-of-vocabulary words pass through
/// unchanged and are counted. An optional prebuilt index accelerates
/// the lookup without changing results.
MdpResult mdp_privatize_sequence(const std::vector<std::string>& words,
                                 const Vocabulary& vocab, double epsilon,
                                 RandomSource& rng,
                                 const VpTreeIndex* index = nullptr);

/// Scalar mechanism under test: maps an input in [0,1] to a noisy output.
using ScalarMechanism = std::function<double(double input, RandomSource& rng)>;

struct DpCheckResult {
  double max_log_ratio = 0;   // +inf when some occupied bin is one-sided
  double std_error = 0;       // Monte Carlo s.e. of the log-ratio at the max bin
  std::size_t argmax_bin = 0;
  bool disjoint_support = false;
};

/// Empirical epsilon-DP audit: run the mechanism `trials` times on the
/// adjacent inputs 0 and 1, histogram both output samples over `bins`
/// shared bins spanning [lo, hi] (samples outside are clamped into the
/// edge bins), and report the max over occupied bins of |ln(p_A/p_B)|.
/// A pure eps-DP mechanism stays below eps plus Monte Carlo slack.
DpCheckResult dp_empirical_check(const ScalarMechanism& mechanism, double epsilon,
                                 std::size_t trials, std::size_t bins,
                                 double lo, double hi, RandomSource& rng);

/// Overload with the default range [-5/eps, 1 + 5/eps] (five noise
/// scales beyond each adjacent input at sensitivity 1).
DpCheckResult dp_empirical_check(const ScalarMechanism& mechanism, double epsilon,
                                 std::size_t trials, std::size_t bins,
                                 RandomSource& rng);

}  // namespace privleak
