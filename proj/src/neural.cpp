#include "privleak/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace privleak {

namespace {

// y = x w + b, rows of x against columns of w.
void affine_forward(const Matrix& x, const Layer& layer, Matrix& y) {
  const std::size_t in = layer.w.rows, out = layer.w.cols;
  y.rows = x.rows;
  y.cols = out;
  y.a.assign(x.rows * out, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = x.row(i);
    double* yi = y.row(i);
    for (std::size_t j = 0; j < out; ++j) yi[j] = layer.b[j];
    for (std::size_t k = 0; k < in; ++k) {
      const double xv = xi[k];
      if (xv == 0.0) continue;
      const double* wk = layer.w.row(k);
      for (std::size_t j = 0; j < out; ++j) yi[j] += xv * wk[j];
    }
  }
}

void relu_inplace(Matrix& m) {
  for (auto& v : m.a) v = v > 0.0 ? v : 0.0;
}

// dW = act^T dY, db = colsum(dY); dAct = dY W^T masked by act > 0 when
// the layer output went through a ReLU.
void affine_backward(const Matrix& act_in, const Layer& layer, const Matrix& dy,
                     Layer& grads, Matrix* dx) {
  const std::size_t in = layer.w.rows, out = layer.w.cols;
  grads.w = Matrix(in, out);
  grads.b.assign(out, 0.0);
  for (std::size_t i = 0; i < dy.rows; ++i) {
    const double* dyi = dy.row(i);
    const double* xi = act_in.row(i);
    for (std::size_t j = 0; j < out; ++j) grads.b[j] += dyi[j];
    for (std::size_t k = 0; k < in; ++k) {
      const double xv = xi[k];
      if (xv == 0.0) continue;
      double* gk = grads.w.row(k);
      for (std::size_t j = 0; j < out; ++j) gk[j] += xv * dyi[j];
    }
  }
  if (dx) {
    *dx = Matrix(dy.rows, in);
    for (std::size_t i = 0; i < dy.rows; ++i) {
      const double* dyi = dy.row(i);
      double* dxi = dx->row(i);
      for (std::size_t k = 0; k < in; ++k) {
        const double* wk = layer.w.row(k);
        double s = 0.0;
        for (std::size_t j = 0; j < out; ++j) s += dyi[j] * wk[j];
        dxi[k] = s;
      }
    }
  }
}

void relu_mask(Matrix& grad, const Matrix& act) {
  for (std::size_t i = 0; i < grad.a.size(); ++i) {
    if (act.a[i] <= 0.0) grad.a[i] = 0.0;
  }
}

// Trunk activations; [0] is the input, every later entry is post-ReLU.
std::vector<Matrix> trunk_forward(const Network& net, const Matrix& x) {
  std::vector<Matrix> acts;
  acts.reserve(net.trunk.size() + 1);
  acts.push_back(x);
  for (const auto& layer : net.trunk) {
    Matrix h;
    affine_forward(acts.back(), layer, h);
    relu_inplace(h);
    acts.push_back(std::move(h));
  }
  return acts;
}

struct HeadPass {
  double loss = 0;
  std::vector<Layer> grads;
  Matrix d_trunk_out;  // gradient wrt the trunk output
};

// Head activations on top of the trunk output.
std::vector<Matrix> head_forward_acts(const Head& head, const Matrix& trunk_out) {
  std::vector<Matrix> acts;
  acts.reserve(head.layers.size() + 1);
  acts.push_back(trunk_out);
  for (std::size_t l = 0; l < head.layers.size(); ++l) {
    Matrix h;
    affine_forward(acts.back(), head.layers[l], h);
    if (l + 1 < head.layers.size()) relu_inplace(h);
    acts.push_back(std::move(h));
  }
  return acts;
}

void softmax_rows(Matrix& logits) {
  for (std::size_t i = 0; i < logits.rows; ++i) {
    double* r = logits.row(i);
    double mx = r[0];
    for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, r[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.cols; ++j) {
      r[j] = std::exp(r[j] - mx);
      sum += r[j];
    }
    const double inv = 1.0 / sum;
    for (std::size_t j = 0; j < logits.cols; ++j) r[j] *= inv;
  }
}

// Cross-entropy loss and head gradients; fills d_trunk_out.
HeadPass head_backward(const Head& head, const Matrix& trunk_out,
                       const std::vector<int>& labels) {
  auto acts = head_forward_acts(head, trunk_out);
  Matrix probs = acts.back();
  softmax_rows(probs);

  const std::size_t batch = trunk_out.rows;
  const std::size_t classes = probs.cols;
  HeadPass pass;
  Matrix delta = probs;  // (p - onehot)/batch
  const double inv_b = 1.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw std::invalid_argument("backward: label out of range for head");
    }
    const double p = std::max(probs(i, y), 1e-300);
    pass.loss -= std::log(p);
    delta(i, y) -= 1.0;
    double* di = delta.row(i);
    for (std::size_t j = 0; j < classes; ++j) di[j] *= inv_b;
  }
  pass.loss *= inv_b;

  pass.grads.resize(head.layers.size());
  Matrix dcur = std::move(delta);
  for (std::size_t l = head.layers.size(); l-- > 0;) {
    Matrix dprev;
    affine_backward(acts[l], head.layers[l], dcur, pass.grads[l], &dprev);
    if (l > 0) relu_mask(dprev, acts[l]);
    dcur = std::move(dprev);
  }
  pass.d_trunk_out = std::move(dcur);
  return pass;
}

// Backprop d_trunk_out through the trunk; optional input gradient.
void trunk_backward(const Network& net, const std::vector<Matrix>& acts,
                    Matrix d_out, std::vector<Layer>& grads, Matrix* dx) {
  grads.resize(net.trunk.size());
  if (net.trunk.empty()) {
    // No trunk: heads sit directly on the input.
    if (dx) *dx = std::move(d_out);
    return;
  }
  relu_mask(d_out, acts.back());
  Matrix dcur = std::move(d_out);
  for (std::size_t l = net.trunk.size(); l-- > 0;) {
    const bool need_prev = l > 0 || dx != nullptr;
    Matrix dprev;
    affine_backward(acts[l], net.trunk[l], dcur, grads[l], need_prev ? &dprev : nullptr);
    if (l > 0) {
      relu_mask(dprev, acts[l]);
      dcur = std::move(dprev);
    } else if (dx) {
      *dx = std::move(dprev);
    }
  }
}

const Head& head_of(const Network& net, const std::string& name) {
  const auto it = net.heads.find(name);
  if (it == net.heads.end()) throw std::invalid_argument("unknown head '" + name + "'");
  return it->second;
}

void sgd_layers(std::vector<Layer>& params, const std::vector<Layer>& grads, double eta) {
  for (std::size_t l = 0; l < params.size(); ++l) {
    auto& w = params[l].w.a;
    const auto& gw = grads[l].w.a;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= eta * gw[i];
    auto& b = params[l].b;
    const auto& gb = grads[l].b;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= eta * gb[i];
  }
}

// acc += scale * g, allocating acc shapes on first use.
void accumulate_layers(std::vector<Layer>& acc, const std::vector<Layer>& g, double scale) {
  if (acc.empty()) {
    acc.resize(g.size());
    for (std::size_t l = 0; l < g.size(); ++l) {
      acc[l].w = Matrix(g[l].w.rows, g[l].w.cols);
      acc[l].b.assign(g[l].b.size(), 0.0);
    }
  }
  for (std::size_t l = 0; l < g.size(); ++l) {
    for (std::size_t i = 0; i < g[l].w.a.size(); ++i) acc[l].w.a[i] += scale * g[l].w.a[i];
    for (std::size_t i = 0; i < g[l].b.size(); ++i) acc[l].b[i] += scale * g[l].b[i];
  }
}

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), x.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy_n(x.row(idx[i]), x.cols, out.row(i));
  }
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels,
                               std::span<const std::size_t> idx) {
  std::vector<int> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = labels[idx[i]];
  return out;
}

void check_finite_loss(double loss, int epoch, std::size_t batch, const std::string& task) {
  if (!std::isfinite(loss)) {
    throw std::runtime_error("training diverged: non-finite " + task + " loss at epoch " +
                             std::to_string(epoch) + ", batch " + std::to_string(batch));
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (lambda < 0) throw std::invalid_argument("train: lambda must be >= 0");
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("train: alpha must be in [0,1]");
  if (cgt_step < 0) throw std::invalid_argument("train: cgt_step must be >= 0");
  if (!(eta > 0)) throw std::invalid_argument("train: eta must be positive");
  if (epochs < 1 || batch_size < 1) throw std::invalid_argument("train: epochs and batch size must be positive");
}

Network make_network(std::size_t input_dim, const std::vector<int>& trunk_widths,
                     const std::map<std::string, HeadSpec>& heads, RandomSource rng) {
  if (input_dim == 0) throw std::invalid_argument("make_network: input_dim must be >= 1");
  Network net;
  net.input_dim = input_dim;
  RandomSource init = rng.derive("init");

  auto glorot_layer = [&](std::size_t in, std::size_t out) {
    Layer layer;
    layer.w = Matrix(in, out);
    const double s = std::sqrt(6.0 / static_cast<double>(in + out));
    for (auto& v : layer.w.a) v = init.uniform(-s, s);
    layer.b.assign(out, 0.0);
    return layer;
  };

  std::size_t cur = input_dim;
  for (int w : trunk_widths) {
    if (w < 1) throw std::invalid_argument("make_network: trunk width must be >= 1");
    net.trunk.push_back(glorot_layer(cur, w));
    cur = w;
  }
  for (const auto& [name, spec] : heads) {
    if (spec.depth < 1 || spec.width < 1 || spec.classes < 2) {
      throw std::invalid_argument("make_network: bad head spec for '" + name + "'");
    }
    Head head;
    std::size_t hcur = cur;
    for (int l = 0; l < spec.depth; ++l) {
      head.layers.push_back(glorot_layer(hcur, spec.width));
      hcur = spec.width;
    }
    head.layers.push_back(glorot_layer(hcur, spec.classes));
    net.heads.emplace(name, std::move(head));
  }
  return net;
}

Matrix forward_batch(const Network& net, const Matrix& x, const std::string& head) {
  if (x.cols != net.input_dim) throw std::invalid_argument("forward: input dimension mismatch");
  const auto acts = trunk_forward(net, x);
  auto hacts = head_forward_acts(head_of(net, head), acts.back());
  Matrix probs = std::move(hacts.back());
  softmax_rows(probs);
  return probs;
}

Vec forward(const Network& net, std::span<const double> x, const std::string& head) {
  Matrix m(1, x.size());
  std::copy(x.begin(), x.end(), m.a.begin());
  Matrix probs = forward_batch(net, m, head);
  return Vec(probs.a.begin(), probs.a.end());
}

std::vector<int> predict(const Network& net, const Matrix& x, const std::string& head) {
  const Matrix probs = forward_batch(net, x, head);
  std::vector<int> out(probs.rows);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    const double* r = probs.row(i);
    out[i] = static_cast<int>(std::max_element(r, r + probs.cols) - r);
  }
  return out;
}

double batch_loss(const Network& net, const Matrix& x, const std::vector<int>& labels,
                  const std::string& head) {
  if (labels.size() != x.rows) throw std::invalid_argument("batch_loss: label count mismatch");
  const Matrix probs = forward_batch(net, x, head);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= probs.cols) {
      throw std::invalid_argument("batch_loss: label out of range");
    }
    loss -= std::log(std::max(probs(i, labels[i]), 1e-300));
  }
  return loss / static_cast<double>(x.rows);
}

BackwardResult backward(const Network& net, const Matrix& x,
                        const std::vector<int>& labels, const std::string& head,
                        bool want_input_grads) {
  if (x.cols != net.input_dim) throw std::invalid_argument("backward: input dimension mismatch");
  if (labels.size() != x.rows) throw std::invalid_argument("backward: label count mismatch");
  const auto acts = trunk_forward(net, x);
  HeadPass pass = head_backward(head_of(net, head), acts.back(), labels);
  BackwardResult res;
  res.loss = pass.loss;
  res.head_grads = std::move(pass.grads);
  trunk_backward(net, acts, std::move(pass.d_trunk_out), res.trunk_grads,
                 want_input_grads ? &res.input_grads : nullptr);
  return res;
}

LossCurve train_joint(Network& net, const TrainData& data, const TrainConfig& cfg,
                      TrainMode mode, const std::string& base_head,
                      const std::string& adv_head) {
  cfg.validate();
  if (data.x.rows == 0) throw std::invalid_argument("train_joint: empty dataset");
  const auto base_it = data.labels.find(base_head);
  if (base_it == data.labels.end() || net.heads.find(base_head) == net.heads.end()) {
    throw std::invalid_argument("train_joint: missing base head '" + base_head + "'");
  }
  const bool has_adv =
      net.heads.count(adv_head) > 0 && data.labels.count(adv_head) > 0;
  if (mode == TrainMode::gradient_reversal && !has_adv) {
    throw std::invalid_argument("train_joint: gradient reversal needs adversary head '" +
                                adv_head + "'");
  }

  RandomSource shuffle_rng = RandomSource(cfg.seed).derive("shuffle");
  std::vector<std::size_t> order(data.x.rows);
  std::iota(order.begin(), order.end(), 0);

  LossCurve curve;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double base_sum = 0.0, adv_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min<std::size_t>(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      const Matrix xb = gather_rows(data.x, idx);
      const auto acts = trunk_forward(net, xb);

      HeadPass base_pass =
          head_backward(net.heads.at(base_head), acts.back(), gather_labels(base_it->second, idx));
      check_finite_loss(base_pass.loss, epoch, batches, base_head);
      base_sum += base_pass.loss;

      Matrix d_trunk = std::move(base_pass.d_trunk_out);
      HeadPass adv_pass;
      if (has_adv) {
        adv_pass = head_backward(net.heads.at(adv_head), acts.back(),
                                 gather_labels(data.labels.at(adv_head), idx));
        check_finite_loss(adv_pass.loss, epoch, batches, adv_head);
        adv_sum += adv_pass.loss;
        if (mode == TrainMode::gradient_reversal) {
          for (std::size_t i = 0; i < d_trunk.a.size(); ++i) {
            d_trunk.a[i] -= cfg.lambda * adv_pass.d_trunk_out.a[i];
          }
        }
      }

      std::vector<Layer> trunk_grads;
      trunk_backward(net, acts, std::move(d_trunk), trunk_grads, nullptr);

      sgd_layers(net.trunk, trunk_grads, cfg.eta);
      sgd_layers(net.heads.at(base_head).layers, base_pass.grads, cfg.eta);
      if (has_adv) sgd_layers(net.heads.at(adv_head).layers, adv_pass.grads, cfg.eta);
      ++batches;
    }
    curve.push_back({epoch, base_head, base_sum / batches});
    if (has_adv) curve.push_back({epoch, adv_head, adv_sum / batches});
  }
  return curve;
}

LossCurve train_cgt(Network& net_base, Network& net_priv, const Matrix& x,
                    const std::vector<int>& labels_base,
                    const std::vector<int>& labels_priv, const TrainConfig& cfg,
                    const std::string& head_base, const std::string& head_priv) {
  cfg.validate();
  if (x.rows == 0) throw std::invalid_argument("train_cgt: empty dataset");
  if (labels_base.size() != x.rows || labels_priv.size() != x.rows) {
    throw std::invalid_argument("train_cgt: label count mismatch");
  }

  RandomSource shuffle_rng = RandomSource(cfg.seed).derive("shuffle");
  std::vector<std::size_t> order(x.rows);
  std::iota(order.begin(), order.end(), 0);

  // Input gradients of the mean batch loss scale as 1/batch; the
  // augmentation uses per-example gradients, hence the factor len.
  auto augment = [&](const Matrix& xb, const Matrix& dx, double step) {
    Matrix out = xb;
    const double s = step * static_cast<double>(xb.rows);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += s * dx.a[i];
    return out;
  };

  LossCurve curve;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double base_sum = 0.0, priv_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min<std::size_t>(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      const Matrix xb = gather_rows(x, idx);
      const auto yb = gather_labels(labels_base, idx);
      const auto yp = gather_labels(labels_priv, idx);

      BackwardResult g_priv = backward(net_priv, xb, yp, head_priv, true);
      BackwardResult g_base = backward(net_base, xb, yb, head_base, true);
      check_finite_loss(g_base.loss, epoch, batches, head_base);
      check_finite_loss(g_priv.loss, epoch, batches, head_priv);
      base_sum += g_base.loss;
      priv_sum += g_priv.loss;

      const Matrix x_priv = augment(xb, g_priv.input_grads, cfg.cgt_step);
      const Matrix x_base = augment(xb, g_base.input_grads, cfg.cgt_step);

      BackwardResult g_base_aug = backward(net_base, x_base, yb, head_base, false);
      BackwardResult g_priv_aug = backward(net_priv, x_priv, yp, head_priv, false);

      std::vector<Layer> trunk_b, head_b, trunk_p, head_p;
      accumulate_layers(trunk_b, g_base.trunk_grads, 1.0 - cfg.alpha);
      accumulate_layers(trunk_b, g_base_aug.trunk_grads, cfg.alpha);
      accumulate_layers(head_b, g_base.head_grads, 1.0 - cfg.alpha);
      accumulate_layers(head_b, g_base_aug.head_grads, cfg.alpha);
      accumulate_layers(trunk_p, g_priv.trunk_grads, 1.0 - cfg.alpha);
      accumulate_layers(trunk_p, g_priv_aug.trunk_grads, cfg.alpha);
      accumulate_layers(head_p, g_priv.head_grads, 1.0 - cfg.alpha);
      accumulate_layers(head_p, g_priv_aug.head_grads, cfg.alpha);

      sgd_layers(net_base.trunk, trunk_b, cfg.eta);
      sgd_layers(net_base.heads.at(head_base).layers, head_b, cfg.eta);
      sgd_layers(net_priv.trunk, trunk_p, cfg.eta);
      sgd_layers(net_priv.heads.at(head_priv).layers, head_p, cfg.eta);
      ++batches;
    }
    curve.push_back({epoch, head_base, base_sum / batches});
    curve.push_back({epoch, head_priv, priv_sum / batches});
  }
  return curve;
}

Matrix ldp_perturb_matrix(const Matrix& x, const PrivacyParams& p, RandomSource rng) {
  p.validate();
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    RandomSource row_rng = rng.derive(i);
    const Vec noisy = ldp_perturb(std::span<const double>(x.row(i), x.cols), p, row_rng);
    std::copy(noisy.begin(), noisy.end(), out.row(i));
  }
  return out;
}

LossCurve train_cape(Network& net, const TrainData& data, const TrainConfig& cfg,
                     const PrivacyParams& p, RandomSource rng,
                     const std::string& base_head, const std::string& adv_head) {
  TrainData noised;
  noised.x = ldp_perturb_matrix(data.x, p, rng.derive("ldp-train"));
  noised.labels = data.labels;
  return train_joint(net, noised, cfg, TrainMode::gradient_reversal, base_head, adv_head);
}

std::vector<double*> all_parameters(Network& net) {
  std::vector<double*> out;
  auto add_layers = [&](std::vector<Layer>& layers) {
    for (auto& l : layers) {
      for (auto& v : l.w.a) out.push_back(&v);
      for (auto& v : l.b) out.push_back(&v);
    }
  };
  add_layers(net.trunk);
  for (auto& [name, head] : net.heads) add_layers(head.layers);
  return out;
}

namespace {

void write_layer(std::ofstream& out, const Layer& layer) {
  out << "layer " << layer.w.rows << " " << layer.w.cols << "\n";
  char buf[64];
  for (std::size_t i = 0; i < layer.w.rows; ++i) {
    for (std::size_t j = 0; j < layer.w.cols; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", layer.w(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
  for (std::size_t j = 0; j < layer.b.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", layer.b[j]);
    out << (j ? " " : "") << buf;
  }
  out << "\n";
}

Layer read_layer(std::ifstream& in) {
  std::string tag;
  std::size_t rows = 0, cols = 0;
  in >> tag >> rows >> cols;
  if (tag != "layer" || !in) throw std::runtime_error("checkpoint: bad layer header");
  Layer layer;
  layer.w = Matrix(rows, cols);
  for (auto& v : layer.w.a) in >> v;
  layer.b.assign(cols, 0.0);
  for (auto& v : layer.b) in >> v;
  if (!in) throw std::runtime_error("checkpoint: truncated layer");
  return layer;
}

}  // namespace

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << "privleak-net 1\n";
  out << "input " << net.input_dim << "\n";
  out << "trunk " << net.trunk.size() << "\n";
  for (const auto& layer : net.trunk) write_layer(out, layer);
  out << "heads " << net.heads.size() << "\n";
  for (const auto& [name, head] : net.heads) {
    out << "head " << name << " " << head.layers.size() << "\n";
    for (const auto& layer : head.layers) write_layer(out, layer);
  }
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "privleak-net" || version != 1) {
    throw std::runtime_error("checkpoint: unrecognized format in " + path);
  }
  Network net;
  std::size_t trunk_count = 0, head_count = 0;
  in >> tag >> net.input_dim;
  if (tag != "input") throw std::runtime_error("checkpoint: missing input dim");
  in >> tag >> trunk_count;
  if (tag != "trunk") throw std::runtime_error("checkpoint: missing trunk section");
  for (std::size_t i = 0; i < trunk_count; ++i) net.trunk.push_back(read_layer(in));
  in >> tag >> head_count;
  if (tag != "heads") throw std::runtime_error("checkpoint: missing heads section");
  for (std::size_t h = 0; h < head_count; ++h) {
    std::string name;
    std::size_t layers = 0;
    in >> tag >> name >> layers;
    if (tag != "head") throw std::runtime_error("checkpoint: bad head header");
    Head head;
    for (std::size_t l = 0; l < layers; ++l) head.layers.push_back(read_layer(in));
    net.heads.emplace(name, std::move(head));
  }
  return net;
}

void write_loss_curve_csv(const LossCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("loss curve: cannot write " + path);
  out << "epoch,task,loss\n";
  char buf[64];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%.9g", p.loss);
    out << p.epoch << "," << p.task << "," << buf << "\n";
  }
}

}  // namespace privleak
