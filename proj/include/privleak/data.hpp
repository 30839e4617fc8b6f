#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "privleak/core.hpp"
#include "privleak/mechanisms.hpp"

namespace privleak {

enum class AgeBin { under36 = 0, from36to45 = 1, over46 = 2 };

constexpr int kNumAgeBins = 3;
constexpr int kNumRatings = 5;

const char* to_string(AgeBin bin);
AgeBin age_bin_from_string(const std::string& s);

/// Bin an author's age (reference_year - birth_year): <36, 36-45, >=46.
AgeBin bin_age(int birth_year, int reference_year = 2021);

/// Length-k vector with a single 1 at `label`.
Vec one_hot(int label, int cardinality);

struct EmbeddingRecord {
  std::string id;
  Vec embedding;
  int rating = 1;  // 1..5
  std::string gender;
  std::string country;
  int birth_year = 1970;
  AgeBin age_bin = AgeBin::under36;
  std::vector<std::string> tokens;  // optional; required for MDP
};

/// Categorical label values in their frozen (sorted) order.
struct CategoryMap {
  std::vector<std::string> values;
  int index_of(const std::string& v) const;
  int size() const { return static_cast<int>(values.size()); }
};

struct Dataset {
  std::vector<EmbeddingRecord> records;
  std::size_t dim = 0;
  CategoryMap genders;
  CategoryMap countries;

  std::size_t size() const { return records.size(); }
  /// Rebuild the frozen gender/country vocabularies from the records.
  void freeze_categories();
  /// Per-record class index for one attribute ("rating", "gender",
  /// "country", "age").
  std::vector<int> labels(const std::string& attribute) const;
  int num_classes(const std::string& attribute) const;
};

struct DatasetSplit {
  std::vector<std::size_t> train, validation, test;
};

/// Paper-style adversarial split: one record drawn uniformly is the
/// centroid, the ceil(f_test*n)-1 nearest records by Euclidean distance
/// (plus the centroid) form the test set, and the remainder splits
/// train:validation at the given ratio uniformly at random.
DatasetSplit wasserstein_split(const Dataset& data, RandomSource rng,
                               std::array<double, 3> fractions = {0.7, 0.1, 0.2});

struct SyntheticSpec {
  std::size_t count = 10000;
  std::size_t dim = 64;
  double rating_signal = 5.0;
  double gender_signal = 5.0;
  double country_signal = 5.0;
  double age_signal = 5.0;
  int num_genders = 2;
  int num_countries = 3;
  std::size_t vocab_size = 256;
  std::size_t tokens_per_record = 8;
  std::uint64_t seed = 1729;
};

struct SyntheticData {
  Dataset dataset;
  Vocabulary vocab;
};

/// Planted-signal generator: each embedding is the sum of one mean
/// direction per attribute value (scaled by that attribute's signal
/// strength) plus unit Gaussian noise. A zero-strength attribute is
/// statistically independent of the embedding. Tokens are the nearest
/// vocabulary words to the embedding, so token sequences inherit the
/// planted signal and can feed the word-swap mechanism.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// JSON-lines dataset: one record per line with fields id, embedding
/// (array) or embedding_row (index into the sidecar matrix), optional
/// tokens, rating, gender, country, birth_year.
Dataset load_dataset(const std::string& path,
                     const std::optional<std::string>& sidecar_path = std::nullopt);
void save_dataset(const Dataset& data, const std::string& path);

/// Sidecar matrix format: 8-byte magic "PLKEMB01", then dims and count
/// as little-endian uint64, then count*dims row-major little-endian
/// float64 values.
void write_embedding_matrix(const std::vector<Vec>& rows, const std::string& path);
std::vector<Vec> read_embedding_matrix(const std::string& path);
void save_dataset_with_sidecar(const Dataset& data, const std::string& path,
                               const std::string& sidecar_path);

}  // namespace privleak
