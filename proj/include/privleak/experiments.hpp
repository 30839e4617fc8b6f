#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "privleak/data.hpp"
#include "privleak/mechanisms.hpp"
#include "privleak/metrics.hpp"
#include "privleak/neural.hpp"

namespace privleak {

enum class PrivacyModel { baseline, gr, cgt, ldp, mdp, cape };

const char* to_string(PrivacyModel m);
PrivacyModel privacy_model_from_string(const std::string& s);

struct AttackerTopology {
  int depth = 1;
  int width = 200;
};

struct ExperimentPlan {
  PrivacyModel model = PrivacyModel::baseline;
  PrivacyParams privacy;  // budget for ldp/mdp/cape
  TrainConfig train;
  AttackerTopology attacker;
  int attacker_epochs = 30;
  std::string target_attribute = "gender";
  std::vector<std::string> attack_attributes = {"gender", "country", "age"};
  std::vector<std::uint64_t> seeds = {1};

  void validate(const Dataset& data, const Vocabulary* vocab) const;
};

struct AttackScore {
  double accuracy = 0;
  double f1 = 0;
  double f1_micro = 0;
  double majority_f1 = 0;    // majority-class predictor on the same test labels
  double in_training_f1 = -1;  // simultaneous adversary head, target attribute only
};

struct MetricsReport {
  double base_accuracy = 0;
  double base_f1 = 0;
  double base_f1_micro = 0;
  std::map<std::string, AttackScore> attacks;
  double sigma2 = 0;  // variance of attack F1 across attributes
  std::size_t mdp_oov = 0;
  std::optional<AnovaSummary> anova;  // filled by report aggregation
};

struct RunOutput {
  MetricsReport report;      // averaged over plan.seeds
  LossCurve first_seed_curve;
  Network first_seed_net;    // trained network of the first seed
};

/// Train per the plan's privacy model, then retrain a fresh attacker per
/// demographic attribute on the frozen trunk representation.
RunOutput run_experiment(const ExperimentPlan& plan, const Dataset& data,
                         const Vocabulary* vocab = nullptr);

/// Seed list for a sweep cell, a stable hash of (base seed, cell
/// coordinates, seed index). Independent of scheduling.
std::vector<std::uint64_t> sweep_cell_seeds(std::uint64_t base_seed, std::uint32_t i,
                                            std::uint32_t j, std::size_t count);

inline const std::vector<double> kDefaultLambdaGrid = {0.1, 0.5, 1.0, 1.5, 2.0};
inline const std::vector<double> kDefaultEpsilonGrid = {0.01, 0.1, 0.5, 1, 5, 10, 20, 50, 100};
inline const std::vector<int> kDefaultDepthGrid = {1, 2, 3, 4, 5};
inline const std::vector<int> kDefaultWidthGrid = {50, 100, 200, 500};

struct LambdaEpsilonCell {
  double lambda = 0, epsilon = 0;
  bool ok = false;
  std::string error;
  double base_f1 = 0, attacker_f1 = 0, relative_change = 0;
};

struct LambdaEpsilonSweep {
  std::vector<LambdaEpsilonCell> cells;  // row-major over (lambda, epsilon)
  double baseline_base_f1 = 0;           // non-private reference
  double baseline_attacker_f1 = 0;
};

/// One run_experiment per (lambda, epsilon) cell; failures are recorded
/// and skipped. `workers` caps parallel cells.
LambdaEpsilonSweep sweep_lambda_epsilon(const ExperimentPlan& base_plan,
                                        const Dataset& data, const Vocabulary* vocab,
                                        const std::vector<double>& lambdas,
                                        const std::vector<double>& epsilons,
                                        int workers = 1);

struct TopologyCell {
  int depth = 0, width = 0;
  bool ok = false;
  std::string error;
  double nonprivate_f1 = 0, cape_f1 = 0, relative_change = 0;
};

struct TopologySweep {
  std::vector<TopologyCell> cells;  // row-major over (depth, width)
};

/// Non-private vs CAPE attacker performance across attacker topologies.
TopologySweep sweep_attacker_topology(const ExperimentPlan& base_plan,
                                      const Dataset& data,
                                      const std::vector<int>& depths,
                                      const std::vector<int>& widths, int workers = 1);

enum class DeviationMechanism { identity, ldp, mdp };

const char* to_string(DeviationMechanism m);
DeviationMechanism deviation_mechanism_from_string(const std::string& s);

struct DeviationRow {
  std::string mechanism;
  double mean_euclidean = 0;
  double mean_cosine = 0;
  std::size_t pairs = 0;
  std::size_t oov = 0;
};

struct ProjectionPoint {
  std::string set;  // "original" or a mechanism name
  double x = 0, y = 0;
};

struct DeviationResult {
  std::vector<DeviationRow> rows;
  std::vector<ProjectionPoint> projection;  // empty unless requested
};

/// Mean paired original-vs-privatized distances per mechanism, plus an
/// optional PCA 2-D projection of all point clouds for plotting. The
/// LDP pairing compares each embedding against its noised copy; the MDP
/// pairing compares the token-mean embedding of the original sequence
/// against that of the swapped sequence.
DeviationResult embedding_deviation(const Dataset& slice,
                                    const std::vector<DeviationMechanism>& mechanisms,
                                    double epsilon_ldp, double epsilon_mdp,
                                    const Vocabulary* vocab, RandomSource rng,
                                    bool project = false);

/// Mean of the in-vocabulary token vectors (zero vector if none).
Vec mean_token_embedding(const std::vector<std::string>& tokens, const Vocabulary& vocab);

/// Privatized copy of a dataset: LDP replaces each embedding with its
/// noised normalization; MDP swaps tokens and re-embeds each record as
/// the token-mean of the swapped sequence.
Dataset privatize_dataset(const Dataset& data, DeviationMechanism mechanism,
                          double epsilon, const Vocabulary* vocab, RandomSource rng,
                          std::size_t* oov_out = nullptr);

// --- report writers (CSV / markdown; all columns documented in README) ---

void write_results_csv(const ExperimentPlan& plan, const MetricsReport& report,
                       const std::string& dataset_name, const std::string& path);
void write_lambda_epsilon_csv(const LambdaEpsilonSweep& sweep, const std::string& path);
void write_topology_csv(const TopologySweep& sweep, const std::string& path);
void write_deviation_csv(const DeviationResult& result, const std::string& path);
void write_projection_csv(const DeviationResult& result, const std::string& path);

/// Aggregate one or more results.csv files into a markdown table with a
/// per-row sigma^2 column and a two-way ANOVA block over the
/// model x attribute attack-F1 grid.
std::string render_report_md(const std::vector<std::string>& results_csv_paths);

}  // namespace privleak
