#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ggig/attribution.hpp"
#include "ggig/network.hpp"

namespace ggig {

struct PerturbationRecord {
  float epsilon;
  std::uint64_t trial_seed;
  double relative_softmax;  // perturbed / original probability of the original prediction
  double absolute_softmax;  // perturbed probability of the original prediction
  double explanation_similarity;  // spearman of perturbed vs. original map
};

struct SigmaSweepConfig {
  std::vector<float> epsilons;  // empty = default_epsilon_grid(net)
  int trials = 20;
  std::uint64_t seed = 1;
};

// `count` evenly spaced values covering [0, weight_std(net)], first exactly 0,
// last exactly the std.
std::vector<float> default_epsilon_grid(const Network& net, int count = 9);

// Weight-perturbation sanity check on one sample. The target class is the
// net's original prediction on x; the reference map is req computed on the
// unperturbed net. For every (epsilon, trial) the weights are re-drawn with
// N(0,epsilon) noise and both the class score and the recomputed map are
// compared against the originals. Rows come back epsilon-major, trial-minor —
// |epsilons|·trials of them. At epsilon 0 relative_softmax and
// explanation_similarity are exactly 1. A perturbed map that is constant has
// no rank structure; its similarity is recorded as 0.
std::vector<PerturbationRecord> sigma_perturbation_sweep(const Network& net,
                                                         const Tensor& x,
                                                         const AttributionRequest& req,
                                                         const SigmaSweepConfig& cfg = {});

void write_sweep_csv(const std::string& path, const std::vector<PerturbationRecord>& rows);

struct RandomizationRecord {
  int layers_randomized;
  AttributionMap map;
  double similarity_to_original;  // spearman vs. depth-0 map; 0 if the map is constant
};

// Cascading randomization on one sample: depth d re-initializes the top d
// parameterized layers (randomize_cascade with this seed, so deeper depths
// extend shallower ones draw-for-draw). Depths run 0..parameterized-layer
// count inclusive; one record vector per request, all for the class the
// unrandomized net predicts on x.
std::vector<std::vector<RandomizationRecord>> cascaded_randomization(
    const Network& net, const Tensor& x, const std::vector<AttributionRequest>& reqs,
    std::uint64_t seed);

void write_cascade_csv(const std::string& path,
                       const std::vector<std::string>& method_labels,
                       const std::vector<std::vector<RandomizationRecord>>& records);

}  // namespace ggig
