#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/activation.hpp"
#include "core/dataset.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace ridgelet {

/// Midpoint grid over [-A, A]^m x [-T/2, T/2): na nodes per a-coordinate and
/// nb nodes along b. Cells are enumerated as (a_index * nb + b_index) where
/// a_index runs over the na^m a-nodes with the last coordinate fastest.
struct GridAxes {
  int dim = 1;
  double A = 5.0;
  double T = 1.0;
  int na = 200;
  int nb = 200;

  void validate() const;
  double da() const { return 2.0 * A / na; }
  double db() const { return T / nb; }
  double a_node(int i) const { return -A + (i + 0.5) * da(); }
  double b_node(int j) const { return -0.5 * T + (j + 0.5) * db(); }
  std::size_t a_count() const;
  std::size_t cell_count() const { return a_count() * static_cast<std::size_t>(nb); }
  double cell_measure() const;
  // (2A)^m T
  double total_measure() const;
  void a_vector(std::size_t a_index, std::span<double> out) const;

  bool operator==(const GridAxes&) const = default;
};

// Axes with a fixed number of a-nodes per unit length, for sweeps over A.
GridAxes axes_with_density(int dim, double A, double T, double a_nodes_per_unit, int nb);

/// Values of a function of (a, b) on a GridAxes grid.
struct SpectrumGrid {
  GridAxes axes;
  std::vector<double> values;

  SpectrumGrid() = default;
  SpectrumGrid(GridAxes ax, std::vector<double> v);
  explicit SpectrumGrid(GridAxes ax);

  double& at(std::size_t a_index, int b_index) { return values[a_index * axes.nb + b_index]; }
  double at(std::size_t a_index, int b_index) const { return values[a_index * axes.nb + b_index]; }

  // sqrt(sum v^2 * cell measure)
  double l2_norm() const;
  // sum v w * cell measure
  double inner(const SpectrumGrid& other) const;
};

/// Finite atomic parameter measure (C0/d) sum_j delta_{(a_j, b_j)} with outer
/// coefficients c_j. Every atom lies in [-A, A]^m x [-T/2, T/2).
struct AtomicDistribution {
  int dim = 1;
  double A = 1.0;
  double T = 1.0;
  std::vector<double> a;  // d x m, row-major
  std::vector<double> b;
  std::vector<double> c;

  AtomicDistribution() = default;
  AtomicDistribution(int dim, double A, double T, std::vector<double> a, std::vector<double> b,
                     std::vector<double> c);

  std::size_t size() const { return b.size(); }
  std::span<const double> a_of(std::size_t j) const {
    return {a.data() + j * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double mass_constant() const;  // C0 = (2A)^m T
  double atom_mass() const { return mass_constant() / static_cast<double>(size()); }
  // L2(lambda_d) and L1(lambda_d) norms of the coefficient function.
  double l2_norm() const;
  double l1_norm() const;
  // lambda_d(supp c): mass of atoms with non-zero coefficient.
  double support_mass() const;

  void validate() const;
};

// d atoms uniform on [-A,A]^m x T with zero coefficients.
AtomicDistribution sample_uniform_atoms(int dim, double A, double T, std::size_t d, std::uint64_t seed);

// Atoms placed on every grid node with c = gamma(node); d = number of cells.
AtomicDistribution atoms_from_grid(const SpectrumGrid& gamma);

inline double dot(std::span<const double> a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * x[k];
  return s;
}

/// R[f](a,b) ~ sum_i y_i rho(a.x_i - b) / (N p(x_i)), for any activation-like
/// callable.
template <class Fn>
double ridgelet_point_with(const Dataset& data, const Fn& rho, std::span<const double> a, double b) {
  if (data.empty()) throw InvalidArgument("ridgelet transform of an empty dataset");
  if (a.size() != static_cast<std::size_t>(data.dim())) throw InvalidArgument("a has wrong dimension");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    acc += data.weight(i) * data.target(i) * rho(dot(a, data.input(i)) - b);
  }
  return acc;
}

template <class Fn>
SpectrumGrid ridgelet_grid_with(const Dataset& data, const Fn& rho, const GridAxes& axes, int threads) {
  axes.validate();
  if (data.empty()) throw InvalidArgument("ridgelet transform of an empty dataset");
  if (axes.dim != data.dim()) throw InvalidArgument("grid and dataset dimensions differ");
  SpectrumGrid out(axes);
  const std::size_t n = data.size();
  std::vector<double> wy(n);
  for (std::size_t i = 0; i < n; ++i) wy[i] = data.weight(i) * data.target(i);
  std::vector<double> b_nodes(static_cast<std::size_t>(axes.nb));
  for (int j = 0; j < axes.nb; ++j) b_nodes[j] = axes.b_node(j);

  parallel_for(axes.a_count(), threads, [&](std::size_t ia) {
    std::vector<double> a(static_cast<std::size_t>(axes.dim));
    axes.a_vector(ia, a);
    std::vector<double> acc(static_cast<std::size_t>(axes.nb), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (wy[i] == 0.0) continue;
      const double t = dot(a, data.input(i));
      for (int j = 0; j < axes.nb; ++j) acc[j] += wy[i] * rho(t - b_nodes[j]);
    }
    for (int j = 0; j < axes.nb; ++j) out.at(ia, j) = acc[j];
  });
  return out;
}

/// S[gamma](x) ~ sum_cells gamma(a,b) sigma(a.x - b) * cell measure.
/// xs is row-major (count x m).
template <class Fn>
std::vector<double> apply_S_grid_with(const SpectrumGrid& gamma, const Fn& sigma, std::span<const double> xs,
                                      int threads) {
  const auto& axes = gamma.axes;
  const auto m = static_cast<std::size_t>(axes.dim);
  if (xs.size() % m != 0) throw InvalidArgument("query points have wrong dimension");
  const std::size_t count = xs.size() / m;
  std::vector<std::vector<double>> a_nodes(axes.a_count(), std::vector<double>(m));
  for (std::size_t ia = 0; ia < a_nodes.size(); ++ia) axes.a_vector(ia, a_nodes[ia]);
  const double w = axes.cell_measure();
  std::vector<double> out(count, 0.0);
  parallel_for(count, threads, [&](std::size_t q) {
    const std::span<const double> x(xs.data() + q * m, m);
    double acc = 0.0;
    for (std::size_t ia = 0; ia < a_nodes.size(); ++ia) {
      const double t = dot(a_nodes[ia], x);
      for (int j = 0; j < axes.nb; ++j) {
        const double g = gamma.at(ia, j);
        if (g != 0.0) acc += g * sigma(t - axes.b_node(j));
      }
    }
    out[q] = acc * w;
  });
  return out;
}

double ridgelet_point(const Dataset& data, const PeriodicActivation& rho, std::span<const double> a, double b);

SpectrumGrid ridgelet_grid(const Dataset& data, const PeriodicActivation& rho, const GridAxes& axes,
                           int threads = 1);

std::vector<double> apply_S_grid(const SpectrumGrid& gamma, const PeriodicActivation& sigma,
                                 std::span<const double> xs, int threads = 1);

// (C0/d) sum_j c_j sigma(a_j.x - b_j) per query point.
std::vector<double> apply_S_atoms(const AtomicDistribution& gamma, const PeriodicActivation& sigma,
                                  std::span<const double> xs, int threads = 1);

struct Reconstruction {
  std::vector<double> values;
  PairReport pairing;
};

// S_sigma[R_rho[f]] at xs, with the (rho, sigma) admissibility pairing.
Reconstruction reconstruct(const Dataset& data, const PeriodicActivation& rho, const PeriodicActivation& sigma,
                           const GridAxes& axes, std::span<const double> xs, int threads = 1);

// Same, for ridgelet functions without a PeriodicActivation form.
template <class Fn>
std::vector<double> reconstruct_with(const Dataset& data, const Fn& rho, const PeriodicActivation& sigma,
                                     const GridAxes& axes, std::span<const double> xs, int threads) {
  const auto spectrum = ridgelet_grid_with(data, rho, axes, threads);
  return apply_S_grid_with(spectrum, sigma, xs, threads);
}

struct PlancherelResult {
  double lhs = 0.0;  // <R f, R g> on the grid
  double rhs = 0.0;  // <f, g> by quadrature over the samples
};

// Both datasets must share their inputs. With extend_until_stable the grid is
// grown by 50% in A (same node density) until lhs changes by < tol relative.
PlancherelResult plancherel_pairing(const Dataset& f, const Dataset& g, const PeriodicActivation& act,
                                    const GridAxes& axes, int threads = 1, bool extend_until_stable = false,
                                    double tol = 1e-3);

// (C0/d) sum_i R[f](a_i,b_i) sigma(a_i.x - b_i) with (a_i,b_i) ~ U([-A,A]^m x T).
std::vector<double> monte_carlo_reconstruct(const Dataset& data, const PeriodicActivation& act, double A,
                                            std::size_t d, std::uint64_t seed, std::span<const double> xs,
                                            int threads = 1);

}  // namespace ridgelet
