#include "core/spectrum.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace ridgelet {

void GridAxes::validate() const {
  if (dim < 1) throw InvalidArgument("grid dimension must be >= 1");
  if (!(A > 0.0) || !(T > 0.0)) throw InvalidArgument("grid needs A > 0 and T > 0");
  if (na < 1 || nb < 1) throw InvalidArgument("grid needs at least one node per axis");
}

std::size_t GridAxes::a_count() const {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(na);
  return n;
}

double GridAxes::cell_measure() const { return std::pow(da(), dim) * db(); }

double GridAxes::total_measure() const { return std::pow(2.0 * A, dim) * T; }

void GridAxes::a_vector(std::size_t a_index, std::span<double> out) const {
  for (int k = dim - 1; k >= 0; --k) {
    out[k] = a_node(static_cast<int>(a_index % static_cast<std::size_t>(na)));
    a_index /= static_cast<std::size_t>(na);
  }
}

GridAxes axes_with_density(int dim, double A, double T, double a_nodes_per_unit, int nb) {
  GridAxes ax;
  ax.dim = dim;
  ax.A = A;
  ax.T = T;
  ax.na = std::max(1, static_cast<int>(std::lround(2.0 * A * a_nodes_per_unit)));
  ax.nb = nb;
  ax.validate();
  return ax;
}

SpectrumGrid::SpectrumGrid(GridAxes ax, std::vector<double> v) : axes(ax), values(std::move(v)) {
  axes.validate();
  if (values.size() != axes.cell_count()) throw InvalidArgument("spectrum values do not match the grid shape");
}

SpectrumGrid::SpectrumGrid(GridAxes ax) : axes(ax) {
  axes.validate();
  values.assign(axes.cell_count(), 0.0);
}

double SpectrumGrid::l2_norm() const { return std::sqrt(inner(*this)); }

double SpectrumGrid::inner(const SpectrumGrid& other) const {
  if (!(axes == other.axes)) throw InvalidArgument("spectra live on different grids");
  double acc = 0.0;
  for (std::size_t c = 0; c < values.size(); ++c) acc += values[c] * other.values[c];
  return acc * axes.cell_measure();
}

AtomicDistribution::AtomicDistribution(int dim_, double A_, double T_, std::vector<double> a_, std::vector<double> b_,
                                       std::vector<double> c_)
    : dim(dim_), A(A_), T(T_), a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
  validate();
}

double AtomicDistribution::mass_constant() const { return std::pow(2.0 * A, dim) * T; }

double AtomicDistribution::l2_norm() const {
  double acc = 0.0;
  for (double v : c) acc += v * v;
  return std::sqrt(acc * atom_mass());
}

double AtomicDistribution::l1_norm() const {
  double acc = 0.0;
  for (double v : c) acc += std::abs(v);
  return acc * atom_mass();
}

double AtomicDistribution::support_mass() const {
  std::size_t k = 0;
  for (double v : c) k += (v != 0.0);
  return static_cast<double>(k) * atom_mass();
}

void AtomicDistribution::validate() const {
  if (dim < 1) throw InvalidArgument("atom dimension must be >= 1");
  if (!(A > 0.0) || !(T > 0.0)) throw InvalidArgument("atomic distribution needs A > 0 and T > 0");
  if (b.empty()) throw InvalidArgument("atomic distribution needs at least one atom");
  if (a.size() != b.size() * static_cast<std::size_t>(dim) || c.size() != b.size()) {
    throw InvalidArgument("atom arrays have inconsistent sizes");
  }
  for (double v : a) {
    if (!(v >= -A && v <= A)) throw InvalidArgument("atom a outside [-A, A]^m");
  }
  for (double v : b) {
    if (!(v >= -0.5 * T && v < 0.5 * T)) throw InvalidArgument("atom b outside [-T/2, T/2)");
  }
}

AtomicDistribution sample_uniform_atoms(int dim, double A, double T, std::size_t d, std::uint64_t seed) {
  if (d == 0) throw InvalidArgument("need at least one atom");
  Rng rng(seed);
  std::vector<double> a(d * static_cast<std::size_t>(dim)), b(d), c(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (int k = 0; k < dim; ++k) a[j * dim + k] = rng.uniform(-A, A);
    b[j] = rng.uniform(-0.5 * T, 0.5 * T);
  }
  return {dim, A, T, std::move(a), std::move(b), std::move(c)};
}

AtomicDistribution atoms_from_grid(const SpectrumGrid& gamma) {
  const auto& ax = gamma.axes;
  const std::size_t d = ax.cell_count();
  std::vector<double> a(d * static_cast<std::size_t>(ax.dim)), b(d), c(d);
  std::vector<double> av(static_cast<std::size_t>(ax.dim));
  for (std::size_t ia = 0; ia < ax.a_count(); ++ia) {
    ax.a_vector(ia, av);
    for (int j = 0; j < ax.nb; ++j) {
      const std::size_t cell = ia * ax.nb + j;
      for (int k = 0; k < ax.dim; ++k) a[cell * ax.dim + k] = av[k];
      b[cell] = ax.b_node(j);
      c[cell] = gamma.at(ia, j);
    }
  }
  return {ax.dim, ax.A, ax.T, std::move(a), std::move(b), std::move(c)};
}

double ridgelet_point(const Dataset& data, const PeriodicActivation& rho, std::span<const double> a, double b) {
  return ridgelet_point_with(data, rho, a, b);
}

SpectrumGrid ridgelet_grid(const Dataset& data, const PeriodicActivation& rho, const GridAxes& axes, int threads) {
  if (rho.period() != axes.T) throw InvalidArgument("activation period differs from the grid's T");
  return ridgelet_grid_with(data, rho, axes, threads);
}

std::vector<double> apply_S_grid(const SpectrumGrid& gamma, const PeriodicActivation& sigma,
                                 std::span<const double> xs, int threads) {
  return apply_S_grid_with(gamma, sigma, xs, threads);
}

std::vector<double> apply_S_atoms(const AtomicDistribution& gamma, const PeriodicActivation& sigma,
                                  std::span<const double> xs, int threads) {
  const auto m = static_cast<std::size_t>(gamma.dim);
  if (xs.size() % m != 0) throw InvalidArgument("query points have wrong dimension");
  const std::size_t count = xs.size() / m;
  const double mass = gamma.atom_mass();
  std::vector<double> out(count, 0.0);
  parallel_for(count, threads, [&](std::size_t q) {
    const std::span<const double> x(xs.data() + q * m, m);
    double acc = 0.0;
    for (std::size_t j = 0; j < gamma.size(); ++j) acc += gamma.c[j] * sigma(dot(gamma.a_of(j), x) - gamma.b[j]);
    out[q] = mass * acc;
  });
  return out;
}

Reconstruction reconstruct(const Dataset& data, const PeriodicActivation& rho, const PeriodicActivation& sigma,
                           const GridAxes& axes, std::span<const double> xs, int threads) {
  Reconstruction r;
  r.pairing = check_pair(rho, sigma, axes.dim);
  const auto spectrum = ridgelet_grid(data, rho, axes, threads);
  r.values = apply_S_grid(spectrum, sigma, xs, threads);
  return r;
}

PlancherelResult plancherel_pairing(const Dataset& f, const Dataset& g, const PeriodicActivation& act,
                                    const GridAxes& axes, int threads, bool extend_until_stable, double tol) {
  if (f.size() != g.size() || f.inputs() != g.inputs()) {
    throw InvalidArgument("plancherel pairing needs datasets on shared inputs");
  }
  PlancherelResult r;
  for (std::size_t i = 0; i < f.size(); ++i) r.rhs += f.weight(i) * f.target(i) * g.target(i);

  GridAxes ax = axes;
  auto lhs_at = [&](const GridAxes& grid) {
    const auto rf = ridgelet_grid(f, act, grid, threads);
    const auto rg = ridgelet_grid(g, act, grid, threads);
    return rf.inner(rg);
  };
  r.lhs = lhs_at(ax);
  if (extend_until_stable) {
    for (int step = 0; step < 4; ++step) {
      GridAxes bigger = ax;
      bigger.A = 1.5 * ax.A;
      bigger.na = static_cast<int>(std::lround(ax.na * 1.5));
      const double next = lhs_at(bigger);
      const double change = std::abs(next - r.lhs);
      r.lhs = next;
      ax = bigger;
      if (change <= tol * std::max(std::abs(next), 1e-300)) break;
    }
  }
  return r;
}

std::vector<double> monte_carlo_reconstruct(const Dataset& data, const PeriodicActivation& act, double A,
                                            std::size_t d, std::uint64_t seed, std::span<const double> xs,
                                            int threads) {
  auto atoms = sample_uniform_atoms(data.dim(), A, act.period(), d, derive_seed(seed, 1));
  parallel_for(d, threads, [&](std::size_t j) {
    atoms.c[j] = ridgelet_point(data, act, atoms.a_of(j), atoms.b[j]);
  });
  return apply_S_atoms(atoms, act, xs, threads);
}

}  // namespace ridgelet
