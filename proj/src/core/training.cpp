#include "core/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace ridgelet {

namespace {

double dot_x(std::span<const double> a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * x[k];
  return s;
}

// Gradient of (1/B) sum_i (y_i - g(x_i))^2 into grad (flatten() layout).
double gradient_into(const NetworkParams& net, const Dataset& data, std::span<const std::size_t> batch,
                     std::vector<double>& grad, std::vector<double>& value, std::vector<double>& slope) {
  const std::size_t d = net.units();
  const auto m = static_cast<std::size_t>(net.dim);
  const std::size_t B = batch.size();
  value.resize(B * d);
  slope.resize(B * d);
  grad.assign(d * (m + 2), 0.0);

  double loss = 0.0;
  std::vector<double> resid(B);
  for (std::size_t i = 0; i < B; ++i) {
    const auto x = data.input(batch[i]);
    double g = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = net.activation.value_and_derivative(dot_x(net.a_of(j), x) - net.b[j], slope[i * d + j]);
      value[i * d + j] = v;
      g += net.c[j] * v;
    }
    resid[i] = data.target(batch[i]) - g;
    loss += resid[i] * resid[i];
  }
  const double scale = -2.0 / static_cast<double>(B);
  double* ga = grad.data();
  double* gb = grad.data() + d * m;
  double* gc = grad.data() + d * (m + 1);
  for (std::size_t i = 0; i < B; ++i) {
    const auto x = data.input(batch[i]);
    const double r = scale * resid[i];
    for (std::size_t j = 0; j < d; ++j) {
      gc[j] += r * value[i * d + j];
      const double common = r * net.c[j] * slope[i * d + j];
      for (std::size_t k = 0; k < m; ++k) ga[j * m + k] += common * x[k];
      gb[j] -= common;
    }
  }
  return loss / static_cast<double>(B);
}

void apply_update(NetworkParams& net, const std::vector<double>& grad, const TrainConfig& cfg) {
  const std::size_t d = net.units();
  const auto m = static_cast<std::size_t>(net.dim);
  const double* ga = grad.data();
  const double* gb = grad.data() + d * m;
  const double* gc = grad.data() + d * (m + 1);
  const double eta = cfg.eta;
  const double beta = cfg.beta;
  for (std::size_t j = 0; j < d; ++j) net.c[j] -= eta * (gc[j] + beta * net.c[j]);
  if (cfg.freeze_hidden) return;
  if (cfg.decay == DecayMode::All) {
    for (std::size_t k = 0; k < d * m; ++k) net.a[k] -= eta * (ga[k] + beta * net.a[k]);
    for (std::size_t j = 0; j < d; ++j) net.b[j] -= eta * (gb[j] + beta * net.b[j]);
  } else {
    const double T = net.activation.period();
    for (std::size_t k = 0; k < d * m; ++k) net.a[k] = std::clamp(net.a[k] - eta * ga[k], -cfg.clip_A, cfg.clip_A);
    for (std::size_t j = 0; j < d; ++j) net.b[j] = wrap_to_torus(net.b[j] - eta * gb[j], T);
  }
}

}  // namespace

double NetworkParams::operator()(std::span<const double> x) const {
  double g = 0.0;
  for (std::size_t j = 0; j < units(); ++j) g += c[j] * activation(dot_x(a_of(j), x) - b[j]);
  return g;
}

bool NetworkParams::all_finite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(a) && finite(b) && finite(c);
}

std::vector<double> NetworkParams::flatten() const {
  std::vector<double> out;
  out.reserve(a.size() + b.size() + c.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

void TrainConfig::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("learning rate must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("weight decay must be >= 0");
  if (batch == 0) throw InvalidArgument("batch size must be positive");
  if (ensemble == 0) throw InvalidArgument("ensemble size must be positive");
  if (units == 0) throw InvalidArgument("unit count must be positive");
  if (!(init_hi > init_lo)) throw InvalidArgument("init range needs lo < hi");
  if (decay == DecayMode::OuterClip && !(clip_A > 0.0)) throw InvalidArgument("clip bound must be positive");
}

NetworkParams init_network(std::size_t d, int m, const TrainConfig& cfg, std::size_t replica,
                           const PeriodicActivation& act) {
  if (d == 0) throw InvalidArgument("network needs at least one unit");
  if (m < 1) throw InvalidArgument("input dimension must be >= 1");
  Rng rng(derive_seed(cfg.seed, replica));
  NetworkParams net;
  net.dim = m;
  net.activation = act;
  net.a.resize(d * static_cast<std::size_t>(m));
  net.b.resize(d);
  net.c.resize(d);
  for (double& v : net.a) v = rng.uniform(cfg.init_lo, cfg.init_hi);
  for (double& v : net.b) v = rng.uniform(cfg.init_lo, cfg.init_hi);
  for (double& v : net.c) v = rng.uniform(cfg.init_lo, cfg.init_hi);
  return net;
}

double mse(const NetworkParams& net, const Dataset& data) {
  if (data.empty()) throw InvalidArgument("loss of an empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data.target(i) - net(data.input(i));
    acc += r * r;
  }
  return acc / static_cast<double>(data.size());
}

std::vector<double> batch_gradient(const NetworkParams& net, const Dataset& data,
                                   std::span<const std::size_t> batch) {
  if (batch.empty()) throw InvalidArgument("empty batch");
  std::vector<double> grad, value, slope;
  gradient_into(net, data, batch, grad, value, slope);
  return grad;
}

double sgd_step(NetworkParams& net, const Dataset& data, std::span<const std::size_t> batch,
                const TrainConfig& cfg) {
  if (batch.empty()) throw InvalidArgument("empty batch");
  std::vector<double> grad, value, slope;
  const double loss = gradient_into(net, data, batch, grad, value, slope);
  apply_update(net, grad, cfg);
  return loss;
}

void sgd_epoch(NetworkParams& net, const Dataset& data, const TrainConfig& cfg, Rng& rng) {
  if (cfg.batch > data.size()) throw InvalidArgument("batch size exceeds the sample count");
  if (data.dim() != net.dim) throw InvalidArgument("network and dataset dimensions differ");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());

  std::vector<double> grad, value, slope;
  std::vector<double> last;
  for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
    const std::size_t stop = std::min(order.size(), start + cfg.batch);
    const std::span<const std::size_t> batch(order.data() + start, stop - start);
    const double loss = gradient_into(net, data, batch, grad, value, slope);
    if (!std::isfinite(loss)) throw DivergedError("training loss is not finite", net.flatten());
    last = net.flatten();
    apply_update(net, grad, cfg);
    if (!net.all_finite()) throw DivergedError("training parameters are not finite", std::move(last));
  }
}

EnsembleResult train_ensemble(const Dataset& data, const TrainConfig& cfg, const PeriodicActivation& act) {
  cfg.validate();
  const std::size_t s = cfg.ensemble;
  std::vector<NetworkParams> nets(s);
  std::vector<double> init_loss(s), final_loss(s);
  std::vector<char> diverged(s, 0);

  parallel_for(s, cfg.threads, [&](std::size_t r) {
    NetworkParams net = init_network(cfg.units, data.dim(), cfg, r, act);
    init_loss[r] = mse(net, data);
    Rng rng(derive_seed(derive_seed(cfg.seed, r), 1));
    try {
      for (std::size_t e = 0; e < cfg.epochs; ++e) sgd_epoch(net, data, cfg, rng);
      final_loss[r] = mse(net, data);
      if (!std::isfinite(final_loss[r])) diverged[r] = 1;
    } catch (const DivergedError&) {
      diverged[r] = 1;
    }
    if (diverged[r]) final_loss[r] = std::numeric_limits<double>::quiet_NaN();
    nets[r] = std::move(net);
  });

  EnsembleResult out;
  out.cloud.dim = data.dim();
  out.cloud.T = act.period();
  out.initial_losses = std::move(init_loss);
  out.final_losses = std::move(final_loss);
  for (std::size_t r = 0; r < s; ++r) {
    if (diverged[r]) {
      out.excluded.push_back(r);
      continue;
    }
    const auto& net = nets[r];
    out.cloud.a.insert(out.cloud.a.end(), net.a.begin(), net.a.end());
    out.cloud.b.insert(out.cloud.b.end(), net.b.begin(), net.b.end());
    out.cloud.c.insert(out.cloud.c.end(), net.c.begin(), net.c.end());
  }
  return out;
}

}  // namespace ridgelet
