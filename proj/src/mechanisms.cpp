#include "privleak/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace privleak {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("privacy: epsilon must be positive");
  if (!(sensitivity > 0.0)) throw std::invalid_argument("privacy: sensitivity must be positive");
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<Vec> vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (words_.empty()) throw std::invalid_argument("vocabulary: empty");
  if (words_.size() != vectors_.size()) {
    throw std::invalid_argument("vocabulary: word/vector count mismatch");
  }
  dim_ = vectors_.front().size();
  if (dim_ == 0) throw std::invalid_argument("vocabulary: zero-dimensional vectors");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (vectors_[i].size() != dim_) {
      throw std::invalid_argument("vocabulary: mixed vector dimensions");
    }
    if (!index_.emplace(words_[i], i).second) {
      throw std::invalid_argument("vocabulary: duplicate word '" + words_[i] + "'");
    }
  }
}

long Vocabulary::index_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("vocabulary: cannot open " + path);
  std::string tag_dim, tag_count;
  std::size_t dim = 0, count = 0;
  in >> tag_dim >> dim >> tag_count >> count;
  if (tag_dim != "dim" || tag_count != "count" || !in) {
    throw std::runtime_error("vocabulary: bad header in " + path);
  }
  in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
  std::vector<std::string> words;
  std::vector<Vec> vectors;
  words.reserve(count);
  vectors.reserve(count);
  std::string line;
  for (std::size_t row = 0; row < count; ++row) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("vocabulary: truncated file " + path);
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("vocabulary: missing tab at entry " + std::to_string(row + 1));
    }
    Vec v(dim);
    std::istringstream nums(line.substr(tab + 1));
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(nums >> v[j])) {
        throw std::runtime_error("vocabulary: bad vector at entry " + std::to_string(row + 1));
      }
    }
    words.push_back(line.substr(0, tab));
    vectors.push_back(std::move(v));
  }
  return Vocabulary(std::move(words), std::move(vectors));
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("vocabulary: cannot write " + path);
  out << "dim " << dim_ << " count " << words_.size() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << words_[i] << '\t';
    for (std::size_t j = 0; j < dim_; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", vectors_[i][j]);
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Vec ldp_perturb(std::span<const double> v, const PrivacyParams& p, RandomSource& rng) {
  p.validate();
  Vec out = normalize_minmax(v);
  const double scale = p.sensitivity / p.epsilon;
  for (auto& x : out) x += rng.laplace(scale);
  return out;
}

Vec mdp_noise(RandomSource& rng, std::size_t m, double epsilon) {
  if (m == 0) throw std::invalid_argument("mdp_noise: dimension must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("mdp_noise: epsilon must be positive");
  Vec u(m);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : u) {
      x = rng.gaussian();
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double l = rng.gamma(static_cast<double>(m), 1.0 / epsilon);
  const double s = l / std::sqrt(n2);
  for (auto& x : u) x *= s;
  return u;
}

std::size_t nearest_index(std::span<const double> v, const Vocabulary& vocab) {
  if (vocab.size() == 0) throw std::invalid_argument("nearest_word: empty vocabulary");
  if (v.size() != vocab.dim()) throw std::invalid_argument("nearest_word: dimension mismatch");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const Vec& w = vocab.vector(i);
    double d = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double t = v[j] - w[j];
      d += t * t;
    }
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

const std::string& nearest_word(std::span<const double> v, const Vocabulary& vocab) {
  return vocab.word(nearest_index(v, vocab));
}

VpTreeIndex::VpTreeIndex(const Vocabulary& vocab, std::uint64_t build_seed)
    : vocab_(&vocab) {
  if (vocab.size() == 0) throw std::invalid_argument("vp-tree: empty vocabulary");
  std::vector<std::size_t> items(vocab.size());
  for (std::size_t i = 0; i < items.size(); ++i) items[i] = i;
  nodes_.reserve(items.size());
  RandomSource rng(build_seed);
  root_ = build(items, 0, items.size(), rng);
}

double VpTreeIndex::dist(std::size_t item, std::span<const double> q) const {
  const Vec& w = vocab_->vector(item);
  double d = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double t = q[j] - w[j];
    d += t * t;
  }
  return std::sqrt(d);
}

int VpTreeIndex::build(std::vector<std::size_t>& items, std::size_t lo, std::size_t hi,
                       RandomSource& rng) {
  if (lo >= hi) return -1;
  // Random vantage point, median split on distance to it.
  std::swap(items[lo], items[lo + rng.uniform_index(hi - lo)]);
  const std::size_t vp = items[lo];
  Node node;
  node.item = vp;
  const std::size_t n_rest = hi - lo - 1;
  if (n_rest > 0) {
    const Vec& pv = vocab_->vector(vp);
    const std::size_t mid = lo + 1 + n_rest / 2;
    std::nth_element(items.begin() + lo + 1, items.begin() + mid, items.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                       return dist(a, pv) < dist(b, pv);
                     });
    node.radius = dist(items[mid], pv);
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int inner = build(items, lo + 1, mid, rng);
    const int outer = build(items, mid, hi, rng);
    nodes_[id].inner = inner;
    nodes_[id].outer = outer;
    return id;
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  return id;
}

void VpTreeIndex::search(int node, std::span<const double> q, std::size_t& best,
                         double& best_d) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const double d = dist(n.item, q);
  // Match the exhaustive scan exactly: strictly better distance wins,
  // equal distance goes to the lower vocabulary index.
  if (d < best_d || (d == best_d && n.item < best)) {
    best_d = d;
    best = n.item;
  }
  if (n.inner < 0 && n.outer < 0) return;
  if (d < n.radius) {
    if (d - best_d <= n.radius) search(n.inner, q, best, best_d);
    if (d + best_d >= n.radius) search(n.outer, q, best, best_d);
  } else {
    if (d + best_d >= n.radius) search(n.outer, q, best, best_d);
    if (d - best_d <= n.radius) search(n.inner, q, best, best_d);
  }
}

std::size_t VpTreeIndex::nearest(std::span<const double> query) const {
  if (query.size() != vocab_->dim()) throw std::invalid_argument("vp-tree: dimension mismatch");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d = std::numeric_limits<double>::infinity();
  search(root_, query, best, best_d);
  return best;
}

MdpResult mdp_privatize_sequence(const std::vector<std::string>& words,
                                 const Vocabulary& vocab, double epsilon,
                                 RandomSource& rng, const VpTreeIndex* index) {
  if (vocab.size() == 0) throw std::invalid_argument("mdp: empty vocabulary");
  if (!(epsilon > 0.0)) throw std::invalid_argument("mdp: epsilon must be positive");
  MdpResult res;
  res.words.reserve(words.size());
  Vec noisy(vocab.dim());
  for (const auto& w : words) {
    const long idx = vocab.index_of(w);
    if (idx < 0) {
      ++res.oov_count;
      res.words.push_back(w);
      continue;
    }
    const Vec noise = mdp_noise(rng, vocab.dim(), epsilon);
    const Vec& v = vocab.vector(static_cast<std::size_t>(idx));
    for (std::size_t j = 0; j < noisy.size(); ++j) noisy[j] = v[j] + noise[j];
    const std::size_t swap =
        index ? index->nearest(noisy) : nearest_index(noisy, vocab);
    if (swap == static_cast<std::size_t>(idx)) ++res.self_swaps;
    res.words.push_back(vocab.word(swap));
  }
  return res;
}

DpCheckResult dp_empirical_check(const ScalarMechanism& mechanism, double epsilon,
                                 std::size_t trials, std::size_t bins,
                                 double lo, double hi, RandomSource& rng) {
  if (bins < 2) throw std::invalid_argument("dp_empirical_check: need at least 2 bins");
  if (trials < 100000) throw std::invalid_argument("dp_empirical_check: need >= 1e5 trials");
  if (!(hi > lo)) throw std::invalid_argument("dp_empirical_check: bad bin range");

  std::vector<std::size_t> count_a(bins, 0), count_b(bins, 0);
  const double width = (hi - lo) / bins;
  auto bin_of = [&](double x) {
    if (x <= lo) return std::size_t{0};
    if (x >= hi) return bins - 1;
    return std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
  };
  RandomSource rng_a = rng.derive("dp-check-a");
  RandomSource rng_b = rng.derive("dp-check-b");
  for (std::size_t t = 0; t < trials; ++t) ++count_a[bin_of(mechanism(0.0, rng_a))];
  for (std::size_t t = 0; t < trials; ++t) ++count_b[bin_of(mechanism(1.0, rng_b))];

  DpCheckResult res;
  for (std::size_t k = 0; k < bins; ++k) {
    if (count_a[k] == 0 && count_b[k] == 0) continue;
    if (count_a[k] == 0 || count_b[k] == 0) {
      res.max_log_ratio = std::numeric_limits<double>::infinity();
      res.disjoint_support = true;
      res.argmax_bin = k;
      res.std_error = 0.0;
      return res;
    }
    const double log_ratio =
        std::fabs(std::log(static_cast<double>(count_a[k]) / count_b[k]));
    if (log_ratio > res.max_log_ratio) {
      res.max_log_ratio = log_ratio;
      res.argmax_bin = k;
      res.std_error = std::sqrt(1.0 / count_a[k] + 1.0 / count_b[k]);
    }
  }
  (void)epsilon;
  return res;
}

DpCheckResult dp_empirical_check(const ScalarMechanism& mechanism, double epsilon,
                                 std::size_t trials, std::size_t bins,
                                 RandomSource& rng) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("dp_empirical_check: epsilon must be positive");
  const double b = 1.0 / epsilon;
  return dp_empirical_check(mechanism, epsilon, trials, bins, -5.0 * b, 1.0 + 5.0 * b, rng);
}

}  // namespace privleak
