#include "quip/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quip/error.hpp"
#include "quip/models/boost.hpp"  // sigmoid

namespace quip::models {

namespace {

constexpr double kProbClip = 1e-12;

void dense_forward(const DenseLayer& l, std::span<const double> in, std::vector<double>& pre) {
  const size_t out_n = l.b.size();
  pre.resize(out_n);
  for (size_t o = 0; o < out_n; ++o) {
    double acc = l.b[o];
    const double* wrow = l.w.data.data() + o * l.w.cols;
    for (size_t i = 0; i < in.size(); ++i) acc += wrow[i] * in[i];
    pre[o] = acc;
  }
}

void relu(const std::vector<double>& pre, std::vector<double>& act) {
  act.resize(pre.size());
  for (size_t i = 0; i < pre.size(); ++i) act[i] = pre[i] > 0 ? pre[i] : 0.0;
}

// d(in) = W^T d(out), masked later by the caller where needed.
void dense_backward_input(const DenseLayer& l, std::span<const double> dout,
                          std::vector<double>& din) {
  din.assign(l.w.cols, 0.0);
  for (size_t o = 0; o < l.b.size(); ++o) {
    const double* wrow = l.w.data.data() + o * l.w.cols;
    for (size_t i = 0; i < l.w.cols; ++i) din[i] += wrow[i] * dout[o];
  }
}

void mask_relu(const std::vector<double>& pre, std::vector<double>& d) {
  for (size_t i = 0; i < d.size(); ++i) {
    if (pre[i] <= 0) d[i] = 0;
  }
}

size_t layer_size(const DenseLayer& l) { return l.w.data.size() + l.b.size(); }

}  // namespace

struct MlpModel::Activations {
  std::vector<double> y1, a1, y2, a2;      // hand path
  std::vector<double> ye1, ae1, ye2, ae2;  // embedding path
  std::vector<double> z;                   // concatenation
  std::vector<double> yj, aj;              // joint hidden
  double logit = 0;
  double p = 0;
};

void MlpModel::forward(std::span<const double> x, std::span<const double> emb,
                       Activations& act) const {
  dense_forward(hand1_, x, act.y1);
  relu(act.y1, act.a1);
  dense_forward(hand2_, act.a1, act.y2);
  relu(act.y2, act.a2);

  if (has_embedding_path()) {
    dense_forward(emb1_, emb, act.ye1);
    relu(act.ye1, act.ae1);
    dense_forward(emb2_, act.ae1, act.ye2);
    relu(act.ye2, act.ae2);
    act.z = act.a2;
    act.z.insert(act.z.end(), act.ae2.begin(), act.ae2.end());
  } else {
    act.z = act.a2;
  }

  dense_forward(joint_, act.z, act.yj);
  relu(act.yj, act.aj);

  double logit = out_.b[0];
  for (size_t i = 0; i < act.aj.size(); ++i) logit += out_.w.data[i] * act.aj[i];
  act.logit = logit;
  act.p = sigmoid(logit);
}

std::vector<const DenseLayer*> MlpModel::layers() const {
  if (has_embedding_path()) return {&hand1_, &hand2_, &emb1_, &emb2_, &joint_, &out_};
  return {&hand1_, &hand2_, &joint_, &out_};
}

std::vector<DenseLayer*> MlpModel::layers() {
  if (has_embedding_path()) return {&hand1_, &hand2_, &emb1_, &emb2_, &joint_, &out_};
  return {&hand1_, &hand2_, &joint_, &out_};
}

std::vector<double> MlpModel::flat_parameters() const {
  std::vector<double> out;
  for (const DenseLayer* l : layers()) {
    out.insert(out.end(), l->w.data.begin(), l->w.data.end());
    out.insert(out.end(), l->b.begin(), l->b.end());
  }
  return out;
}

void MlpModel::set_flat_parameters(std::span<const double> values) {
  size_t at = 0;
  for (DenseLayer* l : layers()) {
    if (at + layer_size(*l) > values.size())
      throw SchemaError("models: flat parameter vector too short");
    std::copy_n(values.begin() + static_cast<ptrdiff_t>(at), l->w.data.size(),
                l->w.data.begin());
    at += l->w.data.size();
    std::copy_n(values.begin() + static_cast<ptrdiff_t>(at), l->b.size(), l->b.begin());
    at += l->b.size();
  }
  if (at != values.size()) throw SchemaError("models: flat parameter vector too long");
}

MlpModel MlpModel::initialize(size_t d_in, size_t d_emb, const MlpParams& params) {
  if (d_in == 0) throw ValueError("models: mlp needs at least one input feature");
  MlpModel m;
  m.d_in_ = d_in;
  m.d_emb_ = d_emb;
  m.params_ = params;

  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
  };
  auto init_layer = [&](DenseLayer& l, size_t out_n, size_t in_n) {
    l.w = Matrix::zeros(out_n, in_n);
    l.b.assign(out_n, 0.0);
    double bound = std::sqrt(6.0 / static_cast<double>(in_n));
    for (double& v : l.w.data) v = (2.0 * uniform() - 1.0) * bound;
  };

  const auto h1 = static_cast<size_t>(params.hand_hidden);
  const auto h2 = static_cast<size_t>(params.hand_out);
  const auto jh = static_cast<size_t>(params.joint_hidden);
  init_layer(m.hand1_, h1, d_in);
  init_layer(m.hand2_, h2, h1);
  size_t joint_in = h2;
  if (d_emb > 0) {
    const auto e1 = static_cast<size_t>(params.emb_hidden);
    const auto e2 = static_cast<size_t>(params.emb_out);
    init_layer(m.emb1_, e1, d_emb);
    init_layer(m.emb2_, e2, e1);
    joint_in += e2;
  }
  init_layer(m.joint_, jh, joint_in);
  init_layer(m.out_, 1, jh);
  return m;
}

double MlpModel::predict_proba(std::span<const double> x, std::span<const double> emb) const {
  if (x.size() != d_in_)
    throw SchemaError("models: mlp expected " + std::to_string(d_in_) + " features, got " +
                      std::to_string(x.size()));
  if (emb.size() != d_emb_)
    throw SchemaError("models: mlp expected embedding dimension " + std::to_string(d_emb_) +
                      ", got " + std::to_string(emb.size()));
  Activations act;
  forward(x, emb, act);
  return act.p;
}

void MlpModel::accumulate_gradient(std::span<const double> x, std::span<const double> emb,
                                   int label, double inv_batch, std::span<double> grad) const {
  Activations act;
  forward(x, emb, act);

  // Gradient offsets per layer, in flat order.
  std::vector<const DenseLayer*> ls = layers();
  std::vector<size_t> offset(ls.size());
  size_t at = 0;
  for (size_t i = 0; i < ls.size(); ++i) {
    offset[i] = at;
    at += layer_size(*ls[i]);
  }
  const size_t i_hand1 = 0, i_hand2 = 1;
  const size_t i_emb1 = has_embedding_path() ? 2 : SIZE_MAX;
  const size_t i_emb2 = has_embedding_path() ? 3 : SIZE_MAX;
  const size_t i_joint = has_embedding_path() ? 4 : 2;
  const size_t i_out = has_embedding_path() ? 5 : 3;

  auto add_layer_grad = [&](size_t layer_idx, const DenseLayer& l,
                            std::span<const double> dout, std::span<const double> in) {
    double* gw = grad.data() + offset[layer_idx];
    double* gb = gw + l.w.data.size();
    for (size_t o = 0; o < l.b.size(); ++o) {
      for (size_t i = 0; i < l.w.cols; ++i) gw[o * l.w.cols + i] += dout[o] * in[i];
      gb[o] += dout[o];
    }
  };

  const double dlogit = (act.p - static_cast<double>(label)) * inv_batch;

  std::vector<double> dout_vec{dlogit};
  add_layer_grad(i_out, out_, dout_vec, act.aj);

  std::vector<double> daj;
  dense_backward_input(out_, dout_vec, daj);
  mask_relu(act.yj, daj);
  add_layer_grad(i_joint, joint_, daj, act.z);

  std::vector<double> dz;
  dense_backward_input(joint_, daj, dz);

  const size_t hand_out_n = hand2_.b.size();
  std::vector<double> da2(dz.begin(), dz.begin() + static_cast<ptrdiff_t>(hand_out_n));
  mask_relu(act.y2, da2);
  add_layer_grad(i_hand2, hand2_, da2, act.a1);

  std::vector<double> da1;
  dense_backward_input(hand2_, da2, da1);
  mask_relu(act.y1, da1);
  add_layer_grad(i_hand1, hand1_, da1, x);

  if (has_embedding_path()) {
    std::vector<double> dae2(dz.begin() + static_cast<ptrdiff_t>(hand_out_n), dz.end());
    mask_relu(act.ye2, dae2);
    add_layer_grad(i_emb2, emb2_, dae2, act.ae1);

    std::vector<double> dae1;
    dense_backward_input(emb2_, dae2, dae1);
    mask_relu(act.ye1, dae1);
    add_layer_grad(i_emb1, emb1_, dae1, emb);
  }
}

namespace {

void check_mlp_data(const Matrix& x, const Matrix* emb, std::span<const int> y, size_t d_in,
                    size_t d_emb) {
  if (x.rows == 0 || x.rows != y.size())
    throw ValueError("models: mlp data is empty or misaligned");
  if (x.cols != d_in) throw SchemaError("models: mlp feature dimension mismatch");
  if (d_emb > 0) {
    if (!emb || emb->rows != x.rows) throw SchemaError("models: mlp embedding rows mismatch");
    if (emb->cols != d_emb) throw SchemaError("models: mlp embedding dimension mismatch");
  }
}

std::span<const double> emb_row(const Matrix* emb, size_t i) {
  return emb ? emb->row(i) : std::span<const double>{};
}

}  // namespace

double MlpModel::batch_loss(const Matrix& x, const Matrix* emb, std::span<const int> y) const {
  check_mlp_data(x, emb, y, d_in_, d_emb_);
  double loss = 0;
  Activations act;
  for (size_t i = 0; i < x.rows; ++i) {
    forward(x.row(i), emb_row(emb, i), act);
    double p = std::clamp(act.p, kProbClip, 1.0 - kProbClip);
    loss += y[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return loss / static_cast<double>(x.rows);
}

std::vector<double> MlpModel::batch_gradient(const Matrix& x, const Matrix* emb,
                                             std::span<const int> y) const {
  check_mlp_data(x, emb, y, d_in_, d_emb_);
  std::vector<double> grad(flat_parameters().size(), 0.0);
  const double inv_batch = 1.0 / static_cast<double>(x.rows);
  for (size_t i = 0; i < x.rows; ++i)
    accumulate_gradient(x.row(i), emb_row(emb, i), y[i], inv_batch, grad);
  return grad;
}

MlpModel MlpModel::train(const Matrix& x, const Matrix* embeddings, std::span<const int> y,
                         const MlpParams& params) {
  const size_t d_emb = embeddings ? embeddings->cols : 0;
  MlpModel model = initialize(x.cols, d_emb, params);
  check_mlp_data(x, embeddings, y, model.d_in_, model.d_emb_);
  if (params.epochs < 1 || params.batch_size < 1)
    throw ValueError("models: epochs and batch_size must be >= 1");

  std::vector<double> theta = model.flat_parameters();
  std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0);

  std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<size_t> order(x.rows);
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  const size_t n = x.rows;
  const auto batch = static_cast<size_t>(params.batch_size);
  uint64_t step = 0;

  Matrix bx, bemb;
  std::vector<int> by;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (size_t i = n - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(rng() % (i + 1));
      std::swap(order[i], order[j]);
    }
    for (size_t start = 0; start < n; start += batch) {
      const size_t stop = std::min(n, start + batch);
      const size_t bn = stop - start;
      bx = Matrix::zeros(bn, x.cols);
      by.resize(bn);
      if (d_emb > 0) bemb = Matrix::zeros(bn, d_emb);
      for (size_t k = 0; k < bn; ++k) {
        size_t src = order[start + k];
        std::copy_n(x.row(src).begin(), x.cols, bx.row(k).begin());
        if (d_emb > 0) std::copy_n(embeddings->row(src).begin(), d_emb, bemb.row(k).begin());
        by[k] = y[src];
      }
      auto grad = model.batch_gradient(bx, d_emb > 0 ? &bemb : nullptr, by);

      ++step;
      const double bc1 = 1.0 - std::pow(params.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(params.beta2, static_cast<double>(step));
      for (size_t p = 0; p < theta.size(); ++p) {
        m[p] = params.beta1 * m[p] + (1.0 - params.beta1) * grad[p];
        v[p] = params.beta2 * v[p] + (1.0 - params.beta2) * grad[p] * grad[p];
        const double m_hat = m[p] / bc1;
        const double v_hat = v[p] / bc2;
        theta[p] -= params.learning_rate * m_hat / (std::sqrt(v_hat) + params.epsilon);
      }
      model.set_flat_parameters(theta);
    }
  }
  return model;
}

}  // namespace quip::models
