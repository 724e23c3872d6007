#include "core/dataset.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace ridgelet {

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::Sin2Pi: return "sin2pi";
    case Generator::GaussianBump: return "gaussian-bump";
    case Generator::SquareWave: return "square-wave";
    case Generator::TopologistSine: return "topologist-sine";
    case Generator::Custom: return "custom";
  }
  return "unknown";
}

Generator generator_from_string(std::string_view name) {
  for (auto g : {Generator::Sin2Pi, Generator::GaussianBump, Generator::SquareWave, Generator::TopologistSine,
                 Generator::Custom}) {
    if (to_string(g) == name) return g;
  }
  throw InvalidArgument("unknown dataset tag '" + std::string(name) + "'");
}

std::string_view to_string(Sampling s) {
  switch (s) {
    case Sampling::Iid: return "iid";
    case Sampling::Stratified: return "stratified";
    case Sampling::Midpoint: return "midpoint";
  }
  return "unknown";
}

Sampling sampling_from_string(std::string_view name) {
  for (auto s : {Sampling::Iid, Sampling::Stratified, Sampling::Midpoint}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown sampling mode '" + std::string(name) + "'");
}

double Density::support_volume(int dim) const { return std::pow(hi - lo, dim); }

Dataset::Dataset(int dim, std::vector<double> inputs, std::vector<double> targets, Density density, Generator tag,
                 double mu)
    : dim_(dim),
      inputs_(std::move(inputs)),
      targets_(std::move(targets)),
      density_(std::move(density)),
      tag_(tag),
      mu_(mu) {
  if (dim_ < 1) throw InvalidArgument("dataset dimension must be >= 1");
  if (inputs_.size() != targets_.size() * static_cast<std::size_t>(dim_)) {
    throw InvalidArgument("dataset inputs/targets size mismatch");
  }
  if (density_.uniform) {
    if (!(density_.hi > density_.lo)) throw InvalidArgument("uniform density needs lo < hi");
  } else {
    if (density_.values.size() != targets_.size()) throw InvalidArgument("tabulated density needs one value per sample");
    for (double p : density_.values) {
      if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("density values must be positive");
    }
  }
}

double Dataset::density_at(std::size_t i) const {
  if (density_.uniform) return 1.0 / density_.support_volume(dim_);
  return density_.values[i];
}

Dataset Dataset::with_targets(std::vector<double> targets) const {
  return {dim_, inputs_, std::move(targets), density_, Generator::Custom, mu_};
}

Dataset Dataset::translated(std::span<const double> shift) const {
  if (shift.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("shift dimension mismatch");
  std::vector<double> moved = inputs_;
  for (std::size_t i = 0; i < size(); ++i) {
    for (int k = 0; k < dim_; ++k) moved[i * dim_ + k] += shift[k];
  }
  Density d = density_;
  if (d.uniform && dim_ == 1) {
    d.lo += shift[0];
    d.hi += shift[0];
  } else if (d.uniform) {
    // A box translated along a non-diagonal keeps its volume; keep p as values.
    d.uniform = false;
    d.values.assign(size(), density_at(0));
  }
  return {dim_, std::move(moved), targets_, std::move(d), Generator::Custom, mu_};
}

Dataset Dataset::dilated(double s) const {
  if (s == 0.0) throw InvalidArgument("dilation factor must be non-zero");
  std::vector<double> scaled = inputs_;
  for (double& v : scaled) v /= s;
  // x' = x / s has density |s|^m p(s x').
  Density d;
  d.uniform = false;
  d.values.resize(size());
  const double jac = std::pow(std::abs(s), dim_);
  for (std::size_t i = 0; i < size(); ++i) d.values[i] = jac * density_at(i);
  return {dim_, std::move(scaled), targets_, std::move(d), Generator::Custom, mu_};
}

double generator_value(Generator tag, double x, double mu) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (tag) {
    case Generator::Sin2Pi: return std::sin(two_pi * x);
    case Generator::GaussianBump: return std::exp(-0.5 * (x - mu) * (x - mu));
    case Generator::SquareWave: {
      const double s = std::sin(two_pi * x);
      return (s > 0.0) - (s < 0.0);
    }
    case Generator::TopologistSine: return std::sin(two_pi / x);
    case Generator::Custom: break;
  }
  throw InvalidArgument("custom datasets have no generator function");
}

std::size_t default_sample_count(Generator tag) { return tag == Generator::TopologistSine ? 10000 : 1000; }

Dataset make_dataset(Generator tag, std::size_t n, std::uint64_t seed, const DatasetOptions& options) {
  if (tag == Generator::Custom) throw InvalidArgument("make_dataset cannot generate a custom dataset");
  if (n == 0) throw InvalidArgument("sample count must be positive");
  if (!(options.hi > options.lo)) throw InvalidArgument("sampling interval needs lo < hi");

  Rng rng(derive_seed(seed, 0));
  const double width = (options.hi - options.lo) / static_cast<double>(n);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    do {
      switch (options.sampling) {
        case Sampling::Iid: x = rng.uniform(options.lo, options.hi); break;
        case Sampling::Stratified: x = options.lo + (static_cast<double>(i) + rng.uniform()) * width; break;
        case Sampling::Midpoint: x = options.lo + (static_cast<double>(i) + 0.5) * width; break;
      }
      // sin(2 pi / x) is undefined at 0; a zero draw has probability zero.
    } while (tag == Generator::TopologistSine && x == 0.0 && options.sampling != Sampling::Midpoint);
    if (tag == Generator::TopologistSine && x == 0.0) x = 0.5 * width;
    xs[i] = x;
    ys[i] = generator_value(tag, x, options.mu);
  }
  Density density;
  density.lo = options.lo;
  density.hi = options.hi;
  return {1, std::move(xs), std::move(ys), std::move(density), tag, options.mu};
}

}  // namespace ridgelet
