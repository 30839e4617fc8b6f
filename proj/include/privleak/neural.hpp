#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "privleak/core.hpp"
#include "privleak/mechanisms.hpp"

namespace privleak {

/// Dense row-major matrix. Weights are stored input x output so the
/// batched forward/backward inner loops run over contiguous memory.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  double* row(std::size_t i) { return a.data() + i * cols; }
  const double* row(std::size_t i) const { return a.data() + i * cols; }
};

struct Layer {
  Matrix w;  // in x out
  Vec b;     // out
};

/// Classifier head: `depth` ReLU hidden layers of `width` units each,
/// then a linear layer into `classes` softmax logits.
struct HeadSpec {
  int depth = 1;
  int width = 200;
  int classes = 2;
};

struct Head {
  std::vector<Layer> layers;  // last layer produces logits
};

/// Shared trunk plus named classifier heads, all with explicit
/// analytic gradients.
struct Network {
  std::size_t input_dim = 0;
  std::vector<Layer> trunk;  // ReLU after every trunk layer
  std::map<std::string, Head> heads;

  std::size_t trunk_output_dim() const {
    return trunk.empty() ? input_dim : trunk.back().b.size();
  }
};

/// Glorot-uniform weights, zero biases, all draws from `rng`.
Network make_network(std::size_t input_dim, const std::vector<int>& trunk_widths,
                     const std::map<std::string, HeadSpec>& heads, RandomSource rng);

/// Softmax probabilities for one input.
Vec forward(const Network& net, std::span<const double> x, const std::string& head);

/// Row-wise softmax probabilities for a batch.
Matrix forward_batch(const Network& net, const Matrix& x, const std::string& head);

std::vector<int> predict(const Network& net, const Matrix& x, const std::string& head);

/// Mean categorical cross-entropy of a batch under one head.
double batch_loss(const Network& net, const Matrix& x, const std::vector<int>& labels,
                  const std::string& head);

struct BackwardResult {
  double loss = 0;
  std::vector<Layer> trunk_grads;
  std::vector<Layer> head_grads;
  Matrix input_grads;  // populated when requested; per mean-batch loss
};

/// Exact analytic gradients of the mean batch cross-entropy under one
/// head, with respect to every trunk and head parameter (and the input
/// when `want_input_grads`).
BackwardResult backward(const Network& net, const Matrix& x,
                        const std::vector<int>& labels, const std::string& head,
                        bool want_input_grads = false);

enum class TrainMode { baseline, gradient_reversal };

struct TrainConfig {
  double lambda = 1.0;    // adversarial weight, >= 0
  double alpha = 0.5;     // cross-gradient mix, in [0,1]
  double cgt_step = 5.0;  // input perturbation step size
  double eta = 0.01;      // learning rate
  int epochs = 50;
  int batch_size = 64;
  std::uint64_t seed = 1729;

  void validate() const;
};

struct LossCurvePoint {
  int epoch = 0;
  std::string task;
  double loss = 0;
};
using LossCurve = std::vector<LossCurvePoint>;

struct TrainData {
  Matrix x;
  std::map<std::string, std::vector<int>> labels;
};

/// Joint training. Baseline: the trunk follows the base-task gradient
/// while the adversary head (when present) trains on the detached trunk
/// output. Gradient reversal: the adversary-head gradient additionally
/// flows into the trunk sign-flipped and scaled by lambda.
LossCurve train_joint(Network& net, const TrainData& data, const TrainConfig& cfg,
                      TrainMode mode, const std::string& base_head = "base",
                      const std::string& adv_head = "adv");

/// Cross-gradient training over two separate networks. Per batch the
/// inputs are augmented along each classifier's input gradient and the
/// losses mixed with weight alpha.
LossCurve train_cgt(Network& net_base, Network& net_priv, const Matrix& x,
                    const std::vector<int>& labels_base,
                    const std::vector<int>& labels_priv, const TrainConfig& cfg,
                    const std::string& head_base = "base",
                    const std::string& head_priv = "priv");

/// Row-wise ldp_perturb with one derived sub-stream per row.
Matrix ldp_perturb_matrix(const Matrix& x, const PrivacyParams& p, RandomSource rng);

/// CAPE: ldp_perturb every input embedding once, then train with
/// gradient reversal. Evaluation inputs must be perturbed by the caller
/// with an independent stream.
LossCurve train_cape(Network& net, const TrainData& data, const TrainConfig& cfg,
                     const PrivacyParams& p, RandomSource rng,
                     const std::string& base_head = "base",
                     const std::string& adv_head = "adv");

/// Pointers to every parameter (trunk first, then heads in name order;
/// weights before biases within a layer).
std::vector<double*> all_parameters(Network& net);

/// Plain-text checkpoint dump; values round-trip exactly.
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

void write_loss_curve_csv(const LossCurve& curve, const std::string& path);

}  // namespace privleak
