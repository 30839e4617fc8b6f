#include "privleak/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace privleak {

using nlohmann::json;

const char* to_string(AgeBin bin) {
  switch (bin) {
    case AgeBin::under36: return "under36";
    case AgeBin::from36to45: return "36to45";
    case AgeBin::over46: return "over46";
  }
  throw std::logic_error("unknown age bin");
}

AgeBin age_bin_from_string(const std::string& s) {
  if (s == "under36") return AgeBin::under36;
  if (s == "36to45") return AgeBin::from36to45;
  if (s == "over46") return AgeBin::over46;
  throw std::invalid_argument("unknown age bin '" + s + "'");
}

AgeBin bin_age(int birth_year, int reference_year) {
  if (birth_year > reference_year) {
    throw std::invalid_argument("bin_age: birth year " + std::to_string(birth_year) +
                                " is after reference year " + std::to_string(reference_year));
  }
  const int age = reference_year - birth_year;
  if (age < 36) return AgeBin::under36;
  if (age <= 45) return AgeBin::from36to45;
  return AgeBin::over46;
}

Vec one_hot(int label, int cardinality) {
  if (label < 0 || label >= cardinality) {
    throw std::invalid_argument("one_hot: label out of range");
  }
  Vec v(cardinality, 0.0);
  v[label] = 1.0;
  return v;
}

int CategoryMap::index_of(const std::string& v) const {
  const auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) {
    throw std::invalid_argument("unknown category value '" + v + "'");
  }
  return static_cast<int>(it - values.begin());
}

void Dataset::freeze_categories() {
  std::set<std::string> g, c;
  for (const auto& r : records) {
    g.insert(r.gender);
    c.insert(r.country);
  }
  genders.values.assign(g.begin(), g.end());
  countries.values.assign(c.begin(), c.end());
}

std::vector<int> Dataset::labels(const std::string& attribute) const {
  std::vector<int> out;
  out.reserve(records.size());
  if (attribute == "rating") {
    for (const auto& r : records) out.push_back(r.rating - 1);
  } else if (attribute == "gender") {
    for (const auto& r : records) out.push_back(genders.index_of(r.gender));
  } else if (attribute == "country") {
    for (const auto& r : records) out.push_back(countries.index_of(r.country));
  } else if (attribute == "age") {
    for (const auto& r : records) out.push_back(static_cast<int>(r.age_bin));
  } else {
    throw std::invalid_argument("unknown attribute '" + attribute + "'");
  }
  return out;
}

int Dataset::num_classes(const std::string& attribute) const {
  if (attribute == "rating") return kNumRatings;
  if (attribute == "gender") return genders.size();
  if (attribute == "country") return countries.size();
  if (attribute == "age") return kNumAgeBins;
  throw std::invalid_argument("unknown attribute '" + attribute + "'");
}

DatasetSplit wasserstein_split(const Dataset& data, RandomSource rng,
                               std::array<double, 3> fractions) {
  const std::size_t n = data.size();
  if (n < 10) throw std::invalid_argument("wasserstein_split: need at least 10 records");
  const double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("wasserstein_split: fractions must sum to 1");
  }

  const std::size_t centroid = rng.uniform_index(n);
  const std::size_t test_size =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fractions[2] * n)));

  // Rank everything by distance to the centroid; ties go to the lower index.
  std::vector<std::pair<double, std::size_t>> ranked(n);
  const Vec& cv = data.records[centroid].embedding;
  for (std::size_t i = 0; i < n; ++i) {
    ranked[i] = {distance(data.records[i].embedding, cv, Metric::euclidean), i};
  }
  std::sort(ranked.begin(), ranked.end());

  DatasetSplit split;
  split.test.reserve(test_size);
  for (std::size_t k = 0; k < test_size; ++k) split.test.push_back(ranked[k].second);
  std::sort(split.test.begin(), split.test.end());

  std::vector<std::size_t> rest;
  rest.reserve(n - test_size);
  for (std::size_t k = test_size; k < n; ++k) rest.push_back(ranked[k].second);
  std::sort(rest.begin(), rest.end());
  rng.shuffle(rest);

  const double val_share = fractions[1] / (fractions[0] + fractions[1]);
  const std::size_t val_size =
      static_cast<std::size_t>(std::llround(val_share * static_cast<double>(rest.size())));
  split.validation.assign(rest.begin(), rest.begin() + val_size);
  split.train.assign(rest.begin() + val_size, rest.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.count == 0) throw std::invalid_argument("generate_synthetic: zero records requested");
  if (spec.dim == 0) throw std::invalid_argument("generate_synthetic: zero dimensions");
  if (spec.vocab_size == 0) throw std::invalid_argument("generate_synthetic: empty vocabulary");
  if (spec.rating_signal < 0 || spec.gender_signal < 0 || spec.country_signal < 0 ||
      spec.age_signal < 0) {
    throw std::invalid_argument("generate_synthetic: signal strengths must be >= 0");
  }

  RandomSource root(spec.seed);

  auto unit_direction = [&](RandomSource r) {
    Vec v(spec.dim);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (auto& x : v) {
        x = r.gaussian();
        n2 += x * x;
      }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    return v;
  };

  auto class_directions = [&](const std::string& name, int k) {
    std::vector<Vec> dirs;
    dirs.reserve(k);
    RandomSource r = root.derive("dir/" + name);
    for (int i = 0; i < k; ++i) dirs.push_back(unit_direction(r.derive(i)));
    return dirs;
  };

  const auto dir_rating = class_directions("rating", kNumRatings);
  const auto dir_gender = class_directions("gender", spec.num_genders);
  const auto dir_country = class_directions("country", spec.num_countries);
  const auto dir_age = class_directions("age", kNumAgeBins);

  // Synthetic vocabulary: standard normal word vectors in the same space.
  std::vector<std::string> words(spec.vocab_size);
  std::vector<Vec> word_vecs(spec.vocab_size);
  RandomSource vr = root.derive("vocab");
  for (std::size_t i = 0; i < spec.vocab_size; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "w%04zu", i);
    words[i] = name;
    RandomSource wr = vr.derive(i);
    Vec v(spec.dim);
    for (auto& x : v) x = wr.gaussian();
    word_vecs[i] = std::move(v);
  }
  Vocabulary vocab(words, word_vecs);

  // Birth-year ranges consistent with the three bins at reference 2021.
  const int year_lo[kNumAgeBins] = {1986, 1976, 1940};
  const int year_hi[kNumAgeBins] = {2003, 1985, 1975};

  Dataset ds;
  ds.dim = spec.dim;
  ds.records.reserve(spec.count);
  RandomSource rec_root = root.derive("record");
  for (std::size_t i = 0; i < spec.count; ++i) {
    RandomSource r = rec_root.derive(i);
    EmbeddingRecord rec;
    char id[24];
    std::snprintf(id, sizeof id, "r%06zu", i);
    rec.id = id;
    rec.rating = 1 + static_cast<int>(r.uniform_index(kNumRatings));
    const int g = static_cast<int>(r.uniform_index(spec.num_genders));
    const int c = static_cast<int>(r.uniform_index(spec.num_countries));
    const int a = static_cast<int>(r.uniform_index(kNumAgeBins));
    rec.gender = "g" + std::to_string(g);
    rec.country = "c" + std::to_string(c);
    rec.birth_year =
        year_lo[a] + static_cast<int>(r.uniform_index(year_hi[a] - year_lo[a] + 1));
    rec.age_bin = bin_age(rec.birth_year);

    rec.embedding.assign(spec.dim, 0.0);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      rec.embedding[j] = spec.rating_signal * dir_rating[rec.rating - 1][j] +
                         spec.gender_signal * dir_gender[g][j] +
                         spec.country_signal * dir_country[c][j] +
                         spec.age_signal * dir_age[static_cast<int>(rec.age_bin)][j] +
                         r.gaussian();
    }

    // Tokens: the nearest vocabulary words to the embedding, nearest first.
    const std::size_t L = std::min(spec.tokens_per_record, spec.vocab_size);
    if (L > 0) {
      std::vector<std::pair<double, std::size_t>> d(spec.vocab_size);
      for (std::size_t w = 0; w < spec.vocab_size; ++w) {
        double s = 0.0;
        const Vec& wv = vocab.vector(w);
        for (std::size_t j = 0; j < spec.dim; ++j) {
          const double t = rec.embedding[j] - wv[j];
          s += t * t;
        }
        d[w] = {s, w};
      }
      std::partial_sort(d.begin(), d.begin() + L, d.end());
      rec.tokens.reserve(L);
      for (std::size_t k = 0; k < L; ++k) rec.tokens.push_back(vocab.word(d[k].second));
    }
    ds.records.push_back(std::move(rec));
  }
  ds.freeze_categories();
  return SyntheticData{std::move(ds), std::move(vocab)};
}

namespace {

[[noreturn]] void row_error(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Dataset load_dataset(const std::string& path,
                     const std::optional<std::string>& sidecar_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset: cannot open " + path);

  std::vector<Vec> sidecar;
  bool sidecar_loaded = false;
  auto sidecar_row = [&](std::size_t row, std::size_t line_no) -> Vec {
    if (!sidecar_loaded) {
      const std::string sc = sidecar_path ? *sidecar_path : path + ".emb";
      sidecar = read_embedding_matrix(sc);
      sidecar_loaded = true;
    }
    if (row >= sidecar.size()) row_error(line_no, "embedding_row out of range");
    return sidecar[row];
  };

  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      row_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    EmbeddingRecord rec;
    try {
      rec.id = j.at("id").get<std::string>();
      if (j.contains("embedding")) {
        rec.embedding = j.at("embedding").get<Vec>();
      } else if (j.contains("embedding_row")) {
        rec.embedding = sidecar_row(j.at("embedding_row").get<std::size_t>(), line_no);
      } else {
        row_error(line_no, "missing embedding or embedding_row");
      }
      rec.rating = j.at("rating").get<int>();
      rec.gender = j.at("gender").get<std::string>();
      rec.country = j.at("country").get<std::string>();
      rec.birth_year = j.at("birth_year").get<int>();
      if (j.contains("tokens")) rec.tokens = j.at("tokens").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      row_error(line_no, std::string("bad field: ") + e.what());
    }
    if (rec.rating < 1 || rec.rating > 5) {
      row_error(line_no, "rating " + std::to_string(rec.rating) + " outside 1..5");
    }
    for (double x : rec.embedding) {
      if (!std::isfinite(x)) row_error(line_no, "non-finite embedding component");
    }
    try {
      rec.age_bin = bin_age(rec.birth_year);
    } catch (const std::invalid_argument& e) {
      row_error(line_no, e.what());
    }
    if (ds.records.empty()) {
      ds.dim = rec.embedding.size();
      if (ds.dim == 0) row_error(line_no, "empty embedding");
    } else if (rec.embedding.size() != ds.dim) {
      row_error(line_no, "embedding dimension " + std::to_string(rec.embedding.size()) +
                             " != dataset dimension " + std::to_string(ds.dim));
    }
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw std::runtime_error("dataset: no records in " + path);
  ds.freeze_categories();
  return ds;
}

namespace {

json record_to_json(const EmbeddingRecord& r, std::optional<std::size_t> sidecar_row) {
  json j;
  j["id"] = r.id;
  if (sidecar_row) {
    j["embedding_row"] = *sidecar_row;
  } else {
    j["embedding"] = r.embedding;
  }
  if (!r.tokens.empty()) j["tokens"] = r.tokens;
  j["rating"] = r.rating;
  j["gender"] = r.gender;
  j["country"] = r.country;
  j["birth_year"] = r.birth_year;
  return j;
}

}  // namespace

void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot write " + path);
  for (const auto& r : data.records) out << record_to_json(r, std::nullopt) << "\n";
}

void save_dataset_with_sidecar(const Dataset& data, const std::string& path,
                               const std::string& sidecar_path) {
  std::vector<Vec> rows;
  rows.reserve(data.size());
  for (const auto& r : data.records) rows.push_back(r.embedding);
  write_embedding_matrix(rows, sidecar_path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot write " + path);
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    out << record_to_json(data.records[i], i) << "\n";
  }
}

static constexpr char kMatrixMagic[8] = {'P', 'L', 'K', 'E', 'M', 'B', '0', '1'};

void write_embedding_matrix(const std::vector<Vec>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("embedding matrix: no rows");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("embedding matrix: cannot write " + path);
  const std::uint64_t dim = rows.front().size();
  const std::uint64_t count = rows.size();
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  out.write(reinterpret_cast<const char*>(&dim), 8);
  out.write(reinterpret_cast<const char*>(&count), 8);
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("embedding matrix: ragged rows");
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(dim * sizeof(double)));
  }
}

std::vector<Vec> read_embedding_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("embedding matrix: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMatrixMagic, 8) != 0) {
    throw std::runtime_error("embedding matrix: bad magic in " + path);
  }
  std::uint64_t dim = 0, count = 0;
  in.read(reinterpret_cast<char*>(&dim), 8);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || dim == 0 || count == 0) {
    throw std::runtime_error("embedding matrix: bad header in " + path);
  }
  std::vector<Vec> rows(count, Vec(dim));
  for (auto& row : rows) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(dim * sizeof(double)));
    if (!in) throw std::runtime_error("embedding matrix: truncated file " + path);
  }
  return rows;
}

}  // namespace privleak
