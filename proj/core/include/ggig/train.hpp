#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ggig/mnist.hpp"
#include "ggig/network.hpp"

namespace ggig {

// The reference MNIST classifier: conv(1→32,5×5,pad 2) → pool → relu →
// conv(32→64,5×5,pad 2) → pool → relu → flatten → dense(3136→1024) → relu →
// dense(1024→10). Parameters start at zero; initialize or load before use.
Network build_mnist_cnn();

struct TrainConfig {
  float learning_rate = 2e-3f;
  float momentum = 0.9f;
  int batch_size = 64;
  int iterations = 400;  // consumed by train(); train_to_accuracy drives by epoch
  std::uint64_t seed = 1;
};

struct TrainLogRow {
  long iteration;
  double loss;
  double test_accuracy;  // NaN on rows where accuracy was not measured
};
using TrainLog = std::vector<TrainLogRow>;

void write_train_log_csv(const std::string& path, const TrainLog& log);

// Classical momentum: v = momentum·v + g ; p = p − lr·v.
void sgd_momentum_step(std::vector<float>& params, std::vector<float>& velocity,
                       const std::vector<float>& grad, float lr, float momentum);

// Minibatch SGD on softmax cross-entropy. Epochs are reshuffled with the
// seeded generator; the tail of an epoch that cannot fill a batch is dropped.
// Deterministic: same initial net, data, config and call sequence give
// bit-identical weights. Throws DivergedError on a non-finite loss.
class Trainer {
 public:
  Trainer(Network net, const DatasetSplit& data, const TrainConfig& cfg);
  ~Trainer();
  Trainer(Trainer&&) noexcept;
  Trainer& operator=(Trainer&&) noexcept;

  // Runs `count` minibatch iterations, appends one log row per iteration,
  // returns the mean loss over them.
  double run(int count, TrainLog* log = nullptr);

  const Network& net() const;
  Network take_net();
  long iteration() const;
  int iterations_per_epoch() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot: cfg.iterations minibatch steps on a copy of `net`.
Network train(const Network& net, const DatasetSplit& data, const TrainConfig& cfg,
              TrainLog* log = nullptr);

struct FitResult {
  Network net;
  float test_accuracy = 0.0f;
  int epochs = 0;
  long iterations = 0;
};

// Epoch-driven training that stops once test accuracy reaches
// `target_accuracy` (or after max_epochs). Accuracy is measured after each
// epoch and recorded on that epoch's final log row.
FitResult train_to_accuracy(const Network& net, const DatasetSplit& train_split,
                            const DatasetSplit& test_split, const TrainConfig& cfg,
                            float target_accuracy = 0.99f, int max_epochs = 20,
                            TrainLog* log = nullptr);

// Fraction of samples whose argmax logit equals the label; order-invariant.
float evaluate_accuracy(const Network& net, const DatasetSplit& data);

}  // namespace ggig
