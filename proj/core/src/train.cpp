#include "ggig/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "engine_detail.hpp"
#include "ggig/errors.hpp"
#include "ggig/gemm.hpp"

namespace ggig {

Network build_mnist_cnn() {
  return Network({1, 28, 28},
                 {LayerSpec::conv2d(1, 32, 5, 1, 2), LayerSpec::maxpool2d(2),
                  LayerSpec::relu(), LayerSpec::conv2d(32, 64, 5, 1, 2),
                  LayerSpec::maxpool2d(2), LayerSpec::relu(), LayerSpec::flatten(),
                  LayerSpec::dense(3136, 1024), LayerSpec::relu(),
                  LayerSpec::dense(1024, 10)});
}

void sgd_momentum_step(std::vector<float>& params, std::vector<float>& velocity,
                       const std::vector<float>& grad, float lr, float momentum) {
  if (params.size() != velocity.size() || params.size() != grad.size()) {
    throw ArgumentError("sgd_momentum_step: mismatched buffer sizes");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    velocity[i] = momentum * velocity[i] + grad[i];
    params[i] -= lr * velocity[i];
  }
}

void write_train_log_csv(const std::string& path, const TrainLog& log) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  file << "iteration,loss,test_accuracy\n";
  char buf[96];
  for (const TrainLogRow& row : log) {
    if (std::isnan(row.test_accuracy)) {
      std::snprintf(buf, sizeof buf, "%ld,%.9g,\n", row.iteration, row.loss);
    } else {
      std::snprintf(buf, sizeof buf, "%ld,%.9g,%.9g\n", row.iteration, row.loss,
                    row.test_accuracy);
    }
    file << buf;
  }
  if (!file) throw FormatError("short write to " + path);
}

struct Trainer::Impl {
  Network net;
  const DatasetSplit& data;
  TrainConfig cfg;
  std::mt19937 rng;
  std::vector<int> order;
  std::size_t cursor;
  long iter = 0;

  detail::BatchBuffers bb;
  std::vector<std::vector<float>> dacts;          // gradient mirror of bb.acts
  std::vector<std::vector<float>> grad_w, grad_b; // per layer
  std::vector<std::vector<float>> vel_w, vel_b;

  Impl(Network n, const DatasetSplit& d, const TrainConfig& c)
      : net(std::move(n)), data(d), cfg(c),
        rng(static_cast<std::mt19937::result_type>(c.seed)) {
    if (cfg.batch_size < 1) throw ArgumentError("batch_size must be positive");
    if (cfg.batch_size > data.size()) {
      throw ArgumentError("batch_size " + std::to_string(cfg.batch_size) +
                          " exceeds dataset size " + std::to_string(data.size()));
    }
    if (!(cfg.momentum >= 0.0f) || !std::isfinite(cfg.learning_rate)) {
      throw ArgumentError("invalid learning rate or momentum");
    }
    const std::vector<int> sample_shape(data.images.shape().begin() + 1,
                                        data.images.shape().end());
    if (sample_shape != net.input_shape()) {
      throw ShapeError("dataset sample shape does not match network input");
    }
    order.resize(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), 0);
    cursor = order.size();  // force a shuffle before the first batch

    detail::prepare_batch_buffers(net, cfg.batch_size, true, bb);
    const std::size_t L = static_cast<std::size_t>(net.layer_count());
    dacts.resize(L + 1);
    for (std::size_t i = 0; i <= L; ++i) dacts[i].resize(bb.acts[i].size());
    grad_w.resize(L);
    grad_b.resize(L);
    vel_w.resize(L);
    vel_b.resize(L);
    for (int li : net.parameterized_layers()) {
      const LayerParams& p = net.params(li);
      grad_w[static_cast<std::size_t>(li)].resize(p.weight.size());
      grad_b[static_cast<std::size_t>(li)].resize(p.bias.size());
      vel_w[static_cast<std::size_t>(li)].assign(p.weight.size(), 0.0f);
      vel_b[static_cast<std::size_t>(li)].assign(p.bias.size(), 0.0f);
    }
  }

  double step() {
    const int B = cfg.batch_size;
    if (cursor + static_cast<std::size_t>(B) > order.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }

    // gather the batch
    const std::size_t in_n = shape_numel(net.input_shape());
    for (int s = 0; s < B; ++s) {
      const int idx = order[cursor + static_cast<std::size_t>(s)];
      std::copy_n(data.images.data() + static_cast<std::size_t>(idx) * in_n, in_n,
                  bb.acts[0].data() + static_cast<std::size_t>(s) * in_n);
    }

    detail::forward_batch_into(net, bb.acts[0].data(), B, bb);

    // softmax cross-entropy and its logit gradient
    const int L = net.layer_count();
    const int C = net.class_count();
    const float* logits = bb.acts[static_cast<std::size_t>(L)].data();
    float* dlogits = dacts[static_cast<std::size_t>(L)].data();
    double loss = 0.0;
    for (int s = 0; s < B; ++s) {
      const int label = data.labels[static_cast<std::size_t>(order[cursor + s])];
      const float* row = logits + static_cast<std::size_t>(s) * C;
      float* drow = dlogits + static_cast<std::size_t>(s) * C;
      float m = row[0];
      for (int c = 1; c < C; ++c) m = std::max(m, row[c]);
      double sum = 0.0;
      for (int c = 0; c < C; ++c) sum += std::exp(static_cast<double>(row[c] - m));
      loss -= static_cast<double>(row[label] - m) - std::log(sum);
      for (int c = 0; c < C; ++c) {
        const double p = std::exp(static_cast<double>(row[c] - m)) / sum;
        drow[c] = (static_cast<float>(p) - (c == label ? 1.0f : 0.0f)) /
                  static_cast<float>(B);
      }
    }
    loss /= B;
    if (!std::isfinite(loss)) {
      throw DivergedError("training diverged: non-finite loss at iteration " +
                          std::to_string(iter + 1));
    }

    backward(B);

    for (int li : net.parameterized_layers()) {
      LayerParams& p = net.params(li);
      sgd_momentum_step(p.weight.values(), vel_w[static_cast<std::size_t>(li)],
                        grad_w[static_cast<std::size_t>(li)], cfg.learning_rate,
                        cfg.momentum);
      sgd_momentum_step(p.bias.values(), vel_b[static_cast<std::size_t>(li)],
                        grad_b[static_cast<std::size_t>(li)], cfg.learning_rate,
                        cfg.momentum);
    }

    cursor += static_cast<std::size_t>(B);
    ++iter;
    return loss;
  }

  void backward(int B) {
    for (int i = net.layer_count() - 1; i >= 0; --i) {
      const LayerSpec& spec = net.layers()[static_cast<std::size_t>(i)];
      const std::vector<int>& in = i == 0 ? net.input_shape() : net.output_shape(i - 1);
      const std::size_t in_n = shape_numel(in);
      const std::size_t out_n = shape_numel(net.output_shape(i));
      const float* dy = dacts[static_cast<std::size_t>(i) + 1].data();
      float* dx = dacts[static_cast<std::size_t>(i)].data();
      const bool need_dx = i > 0;
      switch (spec.kind) {
        case LayerKind::Dense: {
          const LayerParams& p = net.params(i);
          const int out = p.weight.dim(0), infe = p.weight.dim(1);
          std::vector<float>& gw = grad_w[static_cast<std::size_t>(i)];
          std::vector<float>& gb = grad_b[static_cast<std::size_t>(i)];
          std::fill(gw.begin(), gw.end(), 0.0f);
          std::fill(gb.begin(), gb.end(), 0.0f);
          // dW = dYᵀ·X with the batch as the contraction axis (ascending s)
          gemm_tn_acc(gw.data(), dy, bb.acts[static_cast<std::size_t>(i)].data(), out, B,
                      infe);
          for (int s = 0; s < B; ++s) {
            const float* drow = dy + static_cast<std::size_t>(s) * out;
            for (int o = 0; o < out; ++o) gb[static_cast<std::size_t>(o)] += drow[o];
          }
          if (need_dx) {
            std::fill(dx, dx + static_cast<std::size_t>(B) * infe, 0.0f);
            gemm_nn_acc(dx, dy, p.weight.data(), B, out, infe);
          }
          break;
        }
        case LayerKind::Relu:
          detail::relu_backward(bb.acts[static_cast<std::size_t>(i)].data(), dy, dx,
                                static_cast<std::size_t>(B) * in_n);
          break;
        case LayerKind::Flatten:
          std::copy_n(dy, static_cast<std::size_t>(B) * in_n, dx);
          break;
        case LayerKind::MaxPool2d:
          std::fill(dx, dx + static_cast<std::size_t>(B) * in_n, 0.0f);
          for (int s = 0; s < B; ++s) {
            detail::maxpool_backward(bb.pool_idx[static_cast<std::size_t>(i)].data() +
                                         static_cast<std::size_t>(s) * out_n,
                                     dy + static_cast<std::size_t>(s) * out_n, out_n,
                                     dx + static_cast<std::size_t>(s) * in_n);
          }
          break;
        case LayerKind::Conv2d: {
          const LayerParams& p = net.params(i);
          const detail::ConvGeom g = detail::conv_geom(spec, in);
          const int opix = g.out_pix();
          const int rows = g.col_rows();
          std::vector<float>& gw = grad_w[static_cast<std::size_t>(i)];
          std::vector<float>& gb = grad_b[static_cast<std::size_t>(i)];
          std::fill(gw.begin(), gw.end(), 0.0f);
          std::fill(gb.begin(), gb.end(), 0.0f);
          for (int s = 0; s < B; ++s) {
            const float* dys = dy + static_cast<std::size_t>(s) * out_n;
            float* col = bb.cols[static_cast<std::size_t>(i)].data() +
                         static_cast<std::size_t>(s) * g.col_size();
            // weight gradient first: it reads this sample's im2col buffer,
            // which conv_backward_input then reuses as dcol scratch
            gemm_nt_acc(gw.data(), dys, col, g.oc, opix, rows);
            for (int o = 0; o < g.oc; ++o) {
              const float* orow = dys + static_cast<std::size_t>(o) * opix;
              float acc = gb[static_cast<std::size_t>(o)];
              for (int j = 0; j < opix; ++j) acc += orow[j];
              gb[static_cast<std::size_t>(o)] = acc;
            }
            if (need_dx) {
              detail::conv_backward_input(g, p, dys, col,
                                          dx + static_cast<std::size_t>(s) * in_n);
            }
          }
          break;
        }
      }
    }
  }
};

Trainer::Trainer(Network net, const DatasetSplit& data, const TrainConfig& cfg)
    : impl_(std::make_unique<Impl>(std::move(net), data, cfg)) {}
Trainer::~Trainer() = default;
Trainer::Trainer(Trainer&&) noexcept = default;
Trainer& Trainer::operator=(Trainer&&) noexcept = default;

double Trainer::run(int count, TrainLog* log) {
  if (count < 0) throw ArgumentError("iteration count must be >= 0");
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    const double loss = impl_->step();
    total += loss;
    if (log) {
      log->push_back({impl_->iter, loss, std::numeric_limits<double>::quiet_NaN()});
    }
  }
  return count > 0 ? total / count : 0.0;
}

const Network& Trainer::net() const { return impl_->net; }
Network Trainer::take_net() { return std::move(impl_->net); }
long Trainer::iteration() const { return impl_->iter; }
int Trainer::iterations_per_epoch() const {
  return std::max(1, impl_->data.size() / impl_->cfg.batch_size);
}

Network train(const Network& net, const DatasetSplit& data, const TrainConfig& cfg,
              TrainLog* log) {
  if (cfg.iterations < 0) throw ArgumentError("iterations must be >= 0");
  Trainer t(net, data, cfg);
  t.run(cfg.iterations, log);
  return t.take_net();
}

FitResult train_to_accuracy(const Network& net, const DatasetSplit& train_split,
                            const DatasetSplit& test_split, const TrainConfig& cfg,
                            float target_accuracy, int max_epochs, TrainLog* log) {
  if (max_epochs < 1) throw ArgumentError("max_epochs must be >= 1");
  Trainer trainer(net, train_split, cfg);
  FitResult r;
  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    trainer.run(trainer.iterations_per_epoch(), log);
    r.epochs = epoch;
    r.iterations = trainer.iteration();
    r.test_accuracy = evaluate_accuracy(trainer.net(), test_split);
    if (log && !log->empty()) log->back().test_accuracy = r.test_accuracy;
    if (r.test_accuracy >= target_accuracy) break;
  }
  r.net = trainer.take_net();
  return r;
}

float evaluate_accuracy(const Network& net, const DatasetSplit& data) {
  if (data.size() == 0) throw ArgumentError("cannot evaluate on an empty split");
  const std::size_t in_n = shape_numel(net.input_shape());
  const int C = net.class_count();
  detail::BatchBuffers bb;
  constexpr int kChunk = 256;
  long correct = 0;
  for (int s0 = 0; s0 < data.size(); s0 += kChunk) {
    const int chunk = std::min(kChunk, data.size() - s0);
    detail::prepare_batch_buffers(net, chunk, false, bb);
    detail::forward_batch_into(net, data.images.data() + static_cast<std::size_t>(s0) * in_n,
                               chunk, bb);
    const float* logits = bb.acts.back().data();
    for (int s = 0; s < chunk; ++s) {
      const float* row = logits + static_cast<std::size_t>(s) * C;
      int best = 0;
      for (int c = 1; c < C; ++c) {
        if (row[c] > row[best]) best = c;
      }
      if (best == data.labels[static_cast<std::size_t>(s0 + s)]) ++correct;
    }
  }
  return static_cast<float>(correct) / static_cast<float>(data.size());
}

}  // namespace ggig
