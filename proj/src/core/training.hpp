#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/activation.hpp"
#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace ridgelet {

/// g(x) = sum_j c_j sigma(a_j.x - b_j)
struct NetworkParams {
  int dim = 1;
  std::vector<double> a;  // d x m
  std::vector<double> b;
  std::vector<double> c;
  PeriodicActivation activation = PeriodicActivation::relu();

  std::size_t units() const { return b.size(); }
  std::span<const double> a_of(std::size_t j) const {
    return {a.data() + j * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double operator()(std::span<const double> x) const;
  bool all_finite() const;
  // (a..., b..., c...) concatenated
  std::vector<double> flatten() const;
};

enum class DecayMode {
  All,        // weight decay on a, b and c
  OuterClip,  // decay on c only; a clipped to [-clip_A, clip_A]^m, b wrapped onto the torus
};

struct TrainConfig {
  double eta = 0.01;
  double beta = 0.001;
  std::size_t batch = 32;
  std::size_t epochs = 500;
  std::size_t ensemble = 1;
  std::size_t units = 100;
  double init_lo = -1.0;
  double init_hi = 1.0;
  std::uint64_t seed = 0;
  bool freeze_hidden = false;
  DecayMode decay = DecayMode::All;
  double clip_A = 1.0;
  int threads = 1;

  void validate() const;
};

// Parameters drawn i.i.d. U(init_lo, init_hi) from the stream derive_seed(seed, replica).
NetworkParams init_network(std::size_t d, int m, const TrainConfig& cfg, std::size_t replica,
                           const PeriodicActivation& act);

// Mean squared error over a dataset.
double mse(const NetworkParams& net, const Dataset& data);

// One minibatch update on (1/B) sum |y - g|^2 with decay beta theta added to
// each gradient. Returns the batch loss before the step.
double sgd_step(NetworkParams& net, const Dataset& data, std::span<const std::size_t> batch,
                const TrainConfig& cfg);

// Gradient of the batch loss, laid out like NetworkParams::flatten().
std::vector<double> batch_gradient(const NetworkParams& net, const Dataset& data,
                                   std::span<const std::size_t> batch);

// One shuffled pass. Throws DivergedError (carrying the last finite state) on a
// non-finite loss or parameter.
void sgd_epoch(NetworkParams& net, const Dataset& data, const TrainConfig& cfg, Rng& rng);

/// Pooled hidden parameters of trained networks. Unlike AtomicDistribution the
/// atoms are not confined to a box: b is left unwrapped and a may drift.
struct ParameterCloud {
  int dim = 1;
  double T = 1.0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  std::size_t size() const { return b.size(); }
  std::span<const double> a_of(std::size_t j) const {
    return {a.data() + j * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

struct EnsembleResult {
  ParameterCloud cloud;
  std::vector<double> initial_losses;
  std::vector<double> final_losses;      // NaN for excluded replicas
  std::vector<std::size_t> excluded;     // diverged replicas
};

// Trains cfg.ensemble replicas (in parallel) and pools the surviving units in replica order.
EnsembleResult train_ensemble(const Dataset& data, const TrainConfig& cfg, const PeriodicActivation& act);

}  // namespace ridgelet
