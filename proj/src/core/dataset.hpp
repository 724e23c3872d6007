#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ridgelet {

enum class Generator { Sin2Pi, GaussianBump, SquareWave, TopologistSine, Custom };
enum class Sampling { Iid, Stratified, Midpoint };

std::string_view to_string(Generator g);
Generator generator_from_string(std::string_view name);
std::string_view to_string(Sampling s);
Sampling sampling_from_string(std::string_view name);

// Input density: uniform on the box [lo, hi]^m, or explicit per-sample values
// p(x_i) (tabulated).
struct Density {
  bool uniform = true;
  double lo = -1.0;
  double hi = 1.0;
  std::vector<double> values;

  double support_volume(int dim) const;
};

/// i.i.d. (or quadrature) samples (x_i, y_i) of a data-generating function
/// with the density descriptor of the inputs. Inputs are row-major N x m.
class Dataset {
 public:
  Dataset(int dim, std::vector<double> inputs, std::vector<double> targets, Density density,
          Generator tag = Generator::Custom, double mu = 0.0);

  int dim() const { return dim_; }
  std::size_t size() const { return targets_.size(); }
  bool empty() const { return targets_.empty(); }

  std::span<const double> input(std::size_t i) const {
    return {inputs_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double target(std::size_t i) const { return targets_[i]; }
  const std::vector<double>& inputs() const { return inputs_; }
  const std::vector<double>& targets() const { return targets_; }
  const Density& density() const { return density_; }
  Generator tag() const { return tag_; }
  double mu() const { return mu_; }

  // p(x_i)
  double density_at(std::size_t i) const;
  // Quadrature weight 1 / (N p(x_i)) so that sum_i w_i g(x_i) ~ \int g dx.
  double weight(std::size_t i) const { return 1.0 / (static_cast<double>(size()) * density_at(i)); }

  Dataset with_targets(std::vector<double> targets) const;
  // Inputs shifted by `shift`: samples of f(. - shift).
  Dataset translated(std::span<const double> shift) const;
  // Inputs divided by s: samples of f(s .).
  Dataset dilated(double s) const;

 private:
  int dim_;
  std::vector<double> inputs_;
  std::vector<double> targets_;
  Density density_;
  Generator tag_;
  double mu_;
};

struct DatasetOptions {
  double mu = 0.0;                      // bump centre for GaussianBump
  Sampling sampling = Sampling::Iid;
  double lo = -1.0;
  double hi = 1.0;
};

double generator_value(Generator tag, double x, double mu = 0.0);

// One-dimensional datasets with x ~ U(lo, hi). Stratified draws one uniform
// point per equal-width stratum; Midpoint uses the stratum centres.
Dataset make_dataset(Generator tag, std::size_t n, std::uint64_t seed, const DatasetOptions& options = {});

// Default sample counts per generator (10000 for the topologist's sine).
std::size_t default_sample_count(Generator tag);

}  // namespace ridgelet
