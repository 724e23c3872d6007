#include "core/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace ridgelet {

TestFunction TestFunction::constant(double v) {
  TestFunction h;
  h.kind = TestFunctionKind::Constant;
  h.value = v;
  return h;
}

TestFunction TestFunction::indicator(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.size() < 2) throw InvalidArgument("indicator box needs m+1 bounds on each side");
  TestFunction h;
  h.kind = TestFunctionKind::IndicatorBox;
  h.lo = std::move(lo);
  h.hi = std::move(hi);
  return h;
}

TestFunction TestFunction::coordinate_of(int k) {
  if (k < 0) throw InvalidArgument("coordinate index must be >= 0");
  TestFunction h;
  h.kind = TestFunctionKind::Coordinate;
  h.coordinate = k;
  return h;
}

TestFunction TestFunction::trig_in_b(double period, double frequency) {
  if (!(period > 0.0)) throw InvalidArgument("trig test function needs a positive period");
  TestFunction h;
  h.kind = TestFunctionKind::TrigInB;
  h.period = period;
  h.frequency = frequency;
  return h;
}

TestFunction TestFunction::tabulated(SpectrumGrid grid) {
  TestFunction h;
  h.kind = TestFunctionKind::Tabulated;
  h.table = std::move(grid);
  return h;
}

double TestFunction::operator()(std::span<const double> a, double b) const {
  switch (kind) {
    case TestFunctionKind::Constant: return value;
    case TestFunctionKind::IndicatorBox: {
      if (lo.size() != a.size() + 1) throw InvalidArgument("indicator box dimension mismatch");
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] < lo[k] || a[k] > hi[k]) return 0.0;
      }
      return (b >= lo.back() && b <= hi.back()) ? 1.0 : 0.0;
    }
    case TestFunctionKind::Coordinate: {
      const auto k = static_cast<std::size_t>(coordinate);
      if (k < a.size()) return a[k];
      if (k == a.size()) return b;
      throw InvalidArgument("coordinate index out of range");
    }
    case TestFunctionKind::TrigInB: return std::cos(2.0 * std::numbers::pi * frequency * b / period);
    case TestFunctionKind::Tabulated: {
      const auto cell = locate_cell(table->axes, a, b);
      return cell ? table->values[*cell] : 0.0;
    }
  }
  return 0.0;
}

std::string TestFunction::name() const {
  switch (kind) {
    case TestFunctionKind::Constant: return value == 1.0 ? "one" : "constant";
    case TestFunctionKind::IndicatorBox: return "indicator";
    case TestFunctionKind::Coordinate: return coordinate == 0 ? "a" : "coord" + std::to_string(coordinate);
    case TestFunctionKind::TrigInB: return "cos_b";
    case TestFunctionKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

// Lower-cell index of v on n cells of width h starting at lo.
int lower_cell(double v, double lo, double h, int n) {
  const int idx = static_cast<int>(std::ceil((v - lo) / h)) - 1;
  return std::clamp(idx, 0, n - 1);
}

}  // namespace

std::optional<std::size_t> locate_cell(const GridAxes& axes, std::span<const double> a, double b) {
  if (a.size() != static_cast<std::size_t>(axes.dim)) throw InvalidArgument("a has wrong dimension");
  std::size_t ia = 0;
  for (int k = 0; k < axes.dim; ++k) {
    if (!(a[k] >= -axes.A && a[k] <= axes.A)) return std::nullopt;
    ia = ia * static_cast<std::size_t>(axes.na) + static_cast<std::size_t>(lower_cell(a[k], -axes.A, axes.da(), axes.na));
  }
  const double w = wrap_to_torus(b, axes.T);
  const int jb = lower_cell(w, -0.5 * axes.T, axes.db(), axes.nb);
  return ia * static_cast<std::size_t>(axes.nb) + static_cast<std::size_t>(jb);
}

double pair_against_test_fn(const AtomicDistribution& gamma, const TestFunction& h) {
  double acc = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) acc += h(gamma.a_of(j), gamma.b[j]) * gamma.c[j];
  return acc * gamma.atom_mass();
}

double pair_against_test_fn(const SpectrumGrid& gamma, const TestFunction& h) {
  const auto& ax = gamma.axes;
  std::vector<double> a(static_cast<std::size_t>(ax.dim));
  double acc = 0.0;
  for (std::size_t ia = 0; ia < ax.a_count(); ++ia) {
    ax.a_vector(ia, a);
    for (int j = 0; j < ax.nb; ++j) acc += h(a, ax.b_node(j)) * gamma.at(ia, j);
  }
  return acc * ax.cell_measure();
}

SweepReport weak_convergence_sweep(const RidgeProblem& reference, const std::vector<std::size_t>& ds,
                                   const std::vector<TestFunction>& hs, std::size_t trials) {
  if (reference.hidden != HiddenKind::Grid) throw InvalidArgument("sweep reference must be a grid problem");
  if (ds.empty() || hs.empty() || trials == 0) throw InvalidArgument("sweep needs ds, test functions and trials");
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (ds[k] == 0 || (k > 0 && ds[k] <= ds[k - 1])) throw InvalidArgument("ds must be positive and increasing");
  }

  SweepReport rep;
  rep.ds = ds;
  for (const auto& h : hs) rep.h_names.push_back(h.name());

  const auto ref = solve_tikhonov(reference);
  const SpectrumGrid gamma(reference.axes, ref.coefficients);
  for (const auto& h : hs) rep.reference.push_back(pair_against_test_fn(gamma, h));

  const auto& ax = reference.axes;
  rep.entries.resize(ds.size() * trials * hs.size());
  for (std::size_t di = 0; di < ds.size(); ++di) {
    const std::size_t d = ds[di];
    parallel_for(trials, reference.threads, [&](std::size_t t) {
      auto atoms = sample_uniform_atoms(ax.dim, ax.A, ax.T, d, derive_seed(derive_seed(reference.seed, d), t));
      auto problem = RidgeProblem::on_atoms(reference.activation, reference.data, reference.beta, atoms);
      problem.beta_schedule = reference.beta_schedule;
      problem.threads = 1;
      atoms.c = solve_tikhonov(problem).coefficients;
      for (std::size_t hi = 0; hi < hs.size(); ++hi) {
        auto& e = rep.entries[(di * trials + t) * hs.size() + hi];
        e.d = d;
        e.h = hi;
        e.trial = t;
        e.value = pair_against_test_fn(atoms, hs[hi]);
        e.error = std::abs(e.value - rep.reference[hi]);
      }
    });
  }

  rep.median.assign(ds.size(), std::vector<double>(hs.size(), 0.0));
  for (std::size_t di = 0; di < ds.size(); ++di) {
    for (std::size_t hi = 0; hi < hs.size(); ++hi) {
      std::vector<double> errs;
      for (std::size_t t = 0; t < trials; ++t) errs.push_back(rep.entries[(di * trials + t) * hs.size() + hi].error);
      rep.median[di][hi] = percentile(std::move(errs), 50.0);
    }
  }
  return rep;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("percentile of an empty set");
  if (!(q >= 0.0 && q <= 100.0)) throw InvalidArgument("percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ParameterCloud to_cloud(const AtomicDistribution& atoms) {
  ParameterCloud c;
  c.dim = atoms.dim;
  c.T = atoms.T;
  c.a = atoms.a;
  c.b = atoms.b;
  c.c = atoms.c;
  return c;
}

ComparisonReport compare_cloud_to_spectrum(const ParameterCloud& cloud, const SpectrumGrid& spectrum,
                                           const std::vector<TestFunction>& hs) {
  const auto& ax = spectrum.axes;
  if (cloud.dim != ax.dim) throw InvalidArgument("cloud and spectrum dimensions differ");
  ComparisonReport rep;
  rep.histogram = SpectrumGrid(ax);
  rep.counts.assign(ax.cell_count(), 0);
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const auto cell = locate_cell(ax, cloud.a_of(j), cloud.b[j]);
    if (!cell) {
      ++rep.out_of_bounds;
      continue;
    }
    rep.histogram.values[*cell] += cloud.c[j];
    ++rep.counts[*cell];
  }

  double hn = 0.0, sn = 0.0, hs_dot = 0.0;
  for (std::size_t k = 0; k < ax.cell_count(); ++k) {
    hn += rep.histogram.values[k] * rep.histogram.values[k];
    sn += spectrum.values[k] * spectrum.values[k];
    hs_dot += rep.histogram.values[k] * spectrum.values[k];
  }
  hn = std::sqrt(hn);
  sn = std::sqrt(sn);
  if (hn > 0.0) {
    for (double& v : rep.histogram.values) v /= hn;
  }
  rep.cosine = (hn > 0.0 && sn > 0.0) ? hs_dot / (hn * sn) : 0.0;

  std::vector<double> mag(ax.cell_count());
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(spectrum.values[k]);
  const double threshold = percentile(mag, 80.0);
  std::size_t agree = 0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    if (mag[k] < threshold || rep.counts[k] == 0) continue;
    ++rep.compared_cells;
    const double h = rep.histogram.values[k];
    const double s = spectrum.values[k];
    agree += ((h > 0.0) - (h < 0.0)) == ((s > 0.0) - (s < 0.0));
  }
  rep.sign_agreement = rep.compared_cells ? static_cast<double>(agree) / static_cast<double>(rep.compared_cells) : 0.0;

  if (!hs.empty()) {
    SpectrumGrid unit = spectrum;
    if (sn > 0.0) {
      for (double& v : unit.values) v /= sn;
    }
    for (const auto& h : hs) {
      rep.pairing_errors.push_back(std::abs(pair_against_test_fn(rep.histogram, h) - pair_against_test_fn(unit, h)));
    }
  }
  return rep;
}

namespace {

struct Estimate {
  double value = 0.0;
  double variance = 0.0;  // of the estimator
};

Estimate ridgelet_with_error(const Dataset& data, const PeriodicActivation& rho, double a, double b) {
  const auto n = static_cast<double>(data.size());
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = n * data.weight(i) * data.target(i) * rho(a * data.input(i)[0] - b);
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / n;
  const double var = n > 1.0 ? (s2 - n * mean * mean) / (n - 1.0) : 0.0;
  return {mean, std::max(var, 0.0) / n};
}

}  // namespace

ShearCheck translation_shear_check(double mu, std::size_t n, std::uint64_t seed, const PeriodicActivation& act,
                                   const GridAxes& axes, Sampling sampling, int threads) {
  if (axes.dim != 1) throw InvalidArgument("shear check is one-dimensional");
  axes.validate();
  DatasetOptions shifted_opts{mu, sampling, -1.0, 1.0};
  DatasetOptions centred_opts{0.0, sampling, -1.0 - mu, 1.0 - mu};
  const auto shifted = make_dataset(Generator::GaussianBump, n, seed, shifted_opts);
  const auto centred = make_dataset(Generator::GaussianBump, n, derive_seed(seed, 7), centred_opts);

  const std::size_t cells = axes.cell_count();
  std::vector<double> diff2(cells), var(cells);
  parallel_for(axes.a_count(), threads, [&](std::size_t ia) {
    const double a = axes.a_node(static_cast<int>(ia));
    for (int j = 0; j < axes.nb; ++j) {
      const double b = axes.b_node(j);
      const auto lhs = ridgelet_with_error(shifted, act, a, b);
      const auto rhs = ridgelet_with_error(centred, act, a, b - a * mu);
      const std::size_t k = ia * axes.nb + j;
      diff2[k] = (lhs.value - rhs.value) * (lhs.value - rhs.value);
      var[k] = lhs.variance + rhs.variance;
    }
  });
  ShearCheck out;
  out.nodes = cells;
  double sd = 0.0, sv = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    sd += diff2[k];
    sv += var[k];
  }
  out.rms_difference = std::sqrt(sd / static_cast<double>(cells));
  out.rms_standard_error = std::sqrt(sv / static_cast<double>(cells));
  return out;
}

LineSingularity line_singularity(const SpectrumGrid& spectrum, std::span<const double> x0s) {
  const auto& ax = spectrum.axes;
  if (ax.dim != 1) throw InvalidArgument("line singularity check is one-dimensional");
  std::vector<double> on, off;
  for (int i = 0; i < ax.na; ++i) {
    const double a = ax.a_node(i);
    for (int j = 0; j < ax.nb; ++j) {
      const double b = ax.b_node(j);
      bool hit = false;
      for (double x0 : x0s) hit = hit || std::abs(wrap_to_torus(b - a * x0, ax.T)) <= ax.db();
      (hit ? on : off).push_back(std::abs(spectrum.at(static_cast<std::size_t>(i), j)));
    }
  }
  LineSingularity r;
  if (on.empty() || off.empty()) throw InvalidArgument("line check needs cells on and off the lines");
  for (double v : on) r.on_line_mean += v;
  r.on_line_mean /= static_cast<double>(on.size());
  r.off_line_median = percentile(std::move(off), 50.0);
  r.ratio = r.off_line_median > 0.0 ? r.on_line_mean / r.off_line_median : 0.0;
  return r;
}

}  // namespace ridgelet
