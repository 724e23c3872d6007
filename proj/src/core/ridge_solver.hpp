#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/activation.hpp"
#include "core/dataset.hpp"
#include "core/spectrum.hpp"

namespace ridgelet {

enum class HiddenKind { Grid, Atoms };

/// Regularized square risk over a discretized hidden measure:
///
///     J[c] = (1/N) sum_i |y_i - w sum_j c_j sigma(a_j.x_i - b_j)|^2 + beta w sum_j c_j^2
///
/// where w is the cell measure of the grid or C0/d for d atoms.
struct RidgeProblem {
  PeriodicActivation activation;
  Dataset data;
  double beta;
  HiddenKind hidden = HiddenKind::Grid;
  GridAxes axes{};           // hidden == Grid
  AtomicDistribution atoms{};  // hidden == Atoms; only positions are used
  bool beta_schedule = false;  // beta_d = beta (1 + 1/d) on atoms
  std::uint64_t seed = 0;
  int threads = 1;

  static RidgeProblem on_grid(PeriodicActivation act, Dataset data, double beta, GridAxes axes);
  static RidgeProblem on_atoms(PeriodicActivation act, Dataset data, double beta, AtomicDistribution atoms);

  void validate() const;
  std::size_t unknowns() const;
  double cell_weight() const;
  double effective_beta() const;
  double A() const { return hidden == HiddenKind::Grid ? axes.A : atoms.A; }
  double period() const { return activation.period(); }
  // Hidden parameters as (a_j, b_j), row-major a.
  void hidden_nodes(std::vector<double>& a, std::vector<double>& b) const;
};

struct Objective {
  double J = 0.0;
  double fit = 0.0;
  double penalty = 0.0;  // w sum c^2; J = fit + beta * penalty
};

struct SolveReport {
  std::vector<double> coefficients;
  Objective objective;
  double delta_A_norm = 0.0;  // || gamma - R[p f / (beta + p)] ||
  double condition = 0.0;     // reciprocal condition estimate of the factored system
  double normal_residual = 0.0;
  double beta = 0.0;
  double A = 0.0;
  std::string route;          // "primal" or "dual"
  bool jittered = false;
};

// (1/N) sum_i sigma(a.x_i - b) sigma(a'.x_i - b')
double kernel_entry(const PeriodicActivation& act, const Dataset& data, std::span<const double> a, double b,
                    std::span<const double> a2, double b2);

Objective evaluate_objective(const RidgeProblem& problem, std::span<const double> coefficients);

// Model outputs w sum_j c_j sigma(a_j.x_i - b_j) at the data inputs.
std::vector<double> model_outputs(const RidgeProblem& problem, std::span<const double> coefficients);

// Solves (beta I + (w/N) Phi^T Phi) c = Phi^T y / N; the dual form
// (beta I + (w/N) Phi Phi^T) alpha = y, c = Phi^T alpha / N is used when there
// are more unknowns than samples.
SolveReport solve_tikhonov(const RidgeProblem& problem);

// R[p f / (beta + p)] evaluated at the problem's hidden nodes.
std::vector<double> theoretical_minimizer_nodes(const RidgeProblem& problem);
SpectrumGrid theoretical_minimizer(const Dataset& data, const PeriodicActivation& act, double beta,
                                   const GridAxes& axes, int threads = 1);

struct MinimumNormPath {
  std::vector<SolveReport> path;
  std::vector<double> pseudo_inverse;  // minimum-norm least-squares coefficients
  std::vector<double> distance;        // ||c_beta - pseudo_inverse|| per beta
};

MinimumNormPath minimum_norm_limit(const RidgeProblem& problem, const std::vector<double>& betas);

// Minimizes (1/N)|y - S c|^2 + beta ||c - c_init||^2 as c_init + solve on the
// residual target y - S c_init. objective.J holds J_imp at the solution.
SolveReport implicit_reg_solve(const RidgeProblem& problem, std::span<const double> gamma_init);

}  // namespace ridgelet
