#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/ridge_solver.hpp"
#include "core/spectrum.hpp"
#include "core/training.hpp"

namespace ridgelet {

enum class TestFunctionKind { Constant, IndicatorBox, Coordinate, TrigInB, Tabulated };

/// Bounded test function h(a, b) on [-A,A]^m x T.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::Constant;
  double value = 1.0;                  // constant
  std::vector<double> lo, hi;          // indicator box over (a_1..a_m, b), closed
  int coordinate = 0;                  // a_k for k < m, b for k == m
  double period = 1.0;                 // trig: cos(2 pi frequency b / period)
  double frequency = 1.0;
  std::optional<SpectrumGrid> table;   // value of the containing cell, 0 outside

  static TestFunction constant(double v = 1.0);
  static TestFunction indicator(std::vector<double> lo, std::vector<double> hi);
  static TestFunction coordinate_of(int k);
  static TestFunction trig_in_b(double period, double frequency = 1.0);
  static TestFunction tabulated(SpectrumGrid grid);

  double operator()(std::span<const double> a, double b) const;
  std::string name() const;
};

// Cell of (a, b) on the grid, b reduced onto the torus. Points on an interior
// cell boundary belong to the lower cell. Empty if a is outside [-A, A]^m.
std::optional<std::size_t> locate_cell(const GridAxes& axes, std::span<const double> a, double b);

// (C0/d) sum_j h(a_j, b_j) c_j
double pair_against_test_fn(const AtomicDistribution& gamma, const TestFunction& h);
// sum_cells h gamma * cell measure
double pair_against_test_fn(const SpectrumGrid& gamma, const TestFunction& h);

struct SweepEntry {
  std::size_t d = 0;
  std::size_t h = 0;
  std::size_t trial = 0;
  double value = 0.0;
  double error = 0.0;
};

struct SweepReport {
  std::vector<std::size_t> ds;
  std::vector<std::string> h_names;
  std::vector<double> reference;               // grid pairing per h
  std::vector<SweepEntry> entries;             // ordered by (d, trial, h)
  std::vector<std::vector<double>> median;     // [d index][h index]
};

/// For each d and trial: atoms uniform on [-A,A]^m x T, outer coefficients from
/// the atomic ridge problem, pairing with every h against the grid solution
/// of `reference` (a grid problem).
SweepReport weak_convergence_sweep(const RidgeProblem& reference, const std::vector<std::size_t>& ds,
                                   const std::vector<TestFunction>& hs, std::size_t trials);

struct ComparisonReport {
  SpectrumGrid histogram;              // c-weighted, unit Euclidean norm
  std::vector<std::size_t> counts;     // atoms per cell
  double cosine = 0.0;
  double sign_agreement = 0.0;
  std::size_t compared_cells = 0;      // high-magnitude, non-empty cells
  std::size_t out_of_bounds = 0;
  std::vector<double> pairing_errors;  // per test function, on unit-norm fields
};

// Sign agreement uses cells with |spectrum| at or above its 80th percentile
// that contain at least one atom.
ComparisonReport compare_cloud_to_spectrum(const ParameterCloud& cloud, const SpectrumGrid& spectrum,
                                           const std::vector<TestFunction>& hs = {});
ParameterCloud to_cloud(const AtomicDistribution& atoms);

// numpy-style linear-interpolated percentile, q in [0, 100].
double percentile(std::vector<double> values, double q);

struct ShearCheck {
  double rms_difference = 0.0;
  double rms_standard_error = 0.0;  // combined Monte-Carlo error of both sides
  std::size_t nodes = 0;
};

/// Bump at mu on U(-1,1) against the centred bump sampled on the shifted window
/// [-1-mu, 1-mu]: R[f_mu](a,b) vs R[f_0](a, b - a mu), with independent samples.
ShearCheck translation_shear_check(double mu, std::size_t n, std::uint64_t seed, const PeriodicActivation& act,
                                   const GridAxes& axes, Sampling sampling = Sampling::Iid, int threads = 1);

struct LineSingularity {
  double on_line_mean = 0.0;
  double off_line_median = 0.0;
  double ratio = 0.0;
};

// Cells within one b-spacing of the lines b = a x0 (mod T), one-dimensional grids.
LineSingularity line_singularity(const SpectrumGrid& spectrum, std::span<const double> x0s);

}  // namespace ridgelet
