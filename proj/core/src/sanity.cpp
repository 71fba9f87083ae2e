#include "ggig/sanity.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ggig/errors.hpp"
#include "ggig/metrics.hpp"

namespace ggig {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double softmax_prob(const Tensor& logits, int cls) {
  float m = logits[0];
  for (std::size_t c = 1; c < logits.size(); ++c) m = std::max(m, logits[c]);
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    sum += std::exp(static_cast<double>(logits[c] - m));
  }
  return std::exp(static_cast<double>(logits[static_cast<std::size_t>(cls)] - m)) / sum;
}

int argmax(const Tensor& v) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(v.size()); ++c) {
    if (v[static_cast<std::size_t>(c)] > v[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

// Similarity against the reference map; constant maps carry no rank
// information, which we report as zero correlation rather than an error.
double map_similarity(const Tensor& reference, const Tensor& candidate) {
  try {
    return spearman(reference, candidate);
  } catch (const ArgumentError&) {
    return 0.0;
  }
}

}  // namespace

std::vector<float> default_epsilon_grid(const Network& net, int count) {
  if (count < 2) throw ArgumentError("epsilon grid needs at least two points");
  const float sigma = weight_std(net);
  std::vector<float> eps(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    eps[static_cast<std::size_t>(i)] =
        sigma * static_cast<float>(i) / static_cast<float>(count - 1);
  }
  return eps;
}

std::vector<PerturbationRecord> sigma_perturbation_sweep(const Network& net,
                                                         const Tensor& x,
                                                         const AttributionRequest& req,
                                                         const SigmaSweepConfig& cfg) {
  if (cfg.trials < 1) throw ArgumentError("sweep needs at least one trial");
  const std::vector<float> epsilons =
      cfg.epsilons.empty() ? default_epsilon_grid(net) : cfg.epsilons;
  for (float e : epsilons) {
    if (!(e >= 0.0f)) throw ArgumentError("sweep epsilons must be >= 0");
  }

  const Tensor logits0 = forward(net, x);
  const int cls = argmax(logits0);
  const double prob0 = softmax_prob(logits0, cls);
  const AttributionMap map0 = req.compute(net, x, cls);

  std::vector<PerturbationRecord> rows;
  rows.reserve(epsilons.size() * static_cast<std::size_t>(cfg.trials));
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t trial_seed =
          mix64(cfg.seed * 1000003ull + ei * static_cast<std::size_t>(cfg.trials) +
                static_cast<std::size_t>(trial));
      const Network perturbed = perturb_weights(net, epsilons[ei], trial_seed);
      const Tensor logits = forward(perturbed, x);
      const double prob = softmax_prob(logits, cls);
      const AttributionMap map = req.compute(perturbed, x, cls);
      rows.push_back({epsilons[ei], trial_seed, prob / prob0, prob,
                      map_similarity(map0.values, map.values)});
    }
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<PerturbationRecord>& rows) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  file << "epsilon,trial_seed,relative_softmax,absolute_softmax,explanation_similarity\n";
  char buf[160];
  for (const PerturbationRecord& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%llu,%.9g,%.9g,%.9g\n",
                  static_cast<double>(r.epsilon),
                  static_cast<unsigned long long>(r.trial_seed), r.relative_softmax,
                  r.absolute_softmax, r.explanation_similarity);
    file << buf;
  }
  if (!file) throw FormatError("short write to " + path);
}

std::vector<std::vector<RandomizationRecord>> cascaded_randomization(
    const Network& net, const Tensor& x, const std::vector<AttributionRequest>& reqs,
    std::uint64_t seed) {
  if (reqs.empty()) throw ArgumentError("cascaded_randomization needs at least one method");
  const int depth_max = static_cast<int>(net.parameterized_layers().size());
  const Tensor logits0 = forward(net, x);
  const int cls = argmax(logits0);

  std::vector<std::vector<RandomizationRecord>> out(reqs.size());
  for (int d = 0; d <= depth_max; ++d) {
    const Network randomized = d == 0 ? net : randomize_cascade(net, d, seed);
    for (std::size_t r = 0; r < reqs.size(); ++r) {
      RandomizationRecord rec;
      rec.layers_randomized = d;
      rec.map = reqs[r].compute(randomized, x, cls);
      rec.similarity_to_original =
          d == 0 ? 1.0 : map_similarity(out[r][0].map.values, rec.map.values);
      out[r].push_back(std::move(rec));
    }
  }
  return out;
}

void write_cascade_csv(const std::string& path,
                       const std::vector<std::string>& method_labels,
                       const std::vector<std::vector<RandomizationRecord>>& records) {
  if (method_labels.size() != records.size()) {
    throw ArgumentError("cascade CSV needs one label per record series");
  }
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  file << "method,layers_randomized,explanation_similarity\n";
  char buf[160];
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (const RandomizationRecord& rec : records[r]) {
      std::snprintf(buf, sizeof buf, "%s,%d,%.9g\n", method_labels[r].c_str(),
                    rec.layers_randomized, rec.similarity_to_original);
      file << buf;
    }
  }
  if (!file) throw FormatError("short write to " + path);
}

}  // namespace ggig
