#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "core/convergence.hpp"
#include "core/errors.hpp"
#include "test_support.hpp"

using namespace ridgelet;
using oracle::pi;

namespace {

const PeriodicActivation kRelu = normalize_to_admissible(PeriodicActivation::relu(), 1);

GridAxes axes(double A, int na, int nb) {
  GridAxes ax;
  ax.A = A;
  ax.na = na;
  ax.nb = nb;
  return ax;
}

}  // namespace

TEST(Generators, KnownValues) {
  EXPECT_NEAR(generator_value(Generator::Sin2Pi, 0.25), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(generator_value(Generator::GaussianBump, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(generator_value(Generator::GaussianBump, 0.5, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(generator_value(Generator::SquareWave, 0.1), 1.0);
  EXPECT_DOUBLE_EQ(generator_value(Generator::SquareWave, 0.6), -1.0);
  EXPECT_NEAR(generator_value(Generator::TopologistSine, 4.0), 1.0, 1e-15);
  EXPECT_THROW(generator_value(Generator::Custom, 0.0), InvalidArgument);
}

TEST(Generators, DefaultCounts) {
  EXPECT_EQ(default_sample_count(Generator::Sin2Pi), 1000u);
  EXPECT_EQ(default_sample_count(Generator::TopologistSine), 10000u);
}

TEST(Generators, SamplingModes) {
  for (auto mode : {Sampling::Iid, Sampling::Stratified, Sampling::Midpoint}) {
    const auto d = make_dataset(Generator::Sin2Pi, 200, 11, {0.0, mode});
    ASSERT_EQ(d.size(), 200u);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double x = d.input(i)[0];
      EXPECT_GE(x, -1.0);
      EXPECT_LT(x, 1.0);
      EXPECT_DOUBLE_EQ(d.target(i), generator_value(Generator::Sin2Pi, x));
      if (mode != Sampling::Iid) {
        // one point per stratum of width 0.01
        EXPECT_EQ(static_cast<int>(std::floor((x + 1.0) / 0.01)), static_cast<int>(i));
      }
    }
  }
  EXPECT_THROW(make_dataset(Generator::Sin2Pi, 0, 1), InvalidArgument);
  EXPECT_THROW(make_dataset(Generator::Sin2Pi, 10, 1, {0.0, Sampling::Iid, 1.0, 1.0}), InvalidArgument);
}

TEST(Generators, SameSeedSameData) {
  const auto a = make_dataset(Generator::GaussianBump, 300, 9, {0.3});
  const auto b = make_dataset(Generator::GaussianBump, 300, 9, {0.3});
  EXPECT_EQ(a.inputs(), b.inputs());
  EXPECT_EQ(a.targets(), b.targets());
  EXPECT_NE(a.inputs(), make_dataset(Generator::GaussianBump, 300, 10, {0.3}).inputs());
}

TEST(TestFunctions, Evaluation) {
  const std::vector<double> a{0.4};
  EXPECT_EQ(TestFunction::constant(3.0)(a, 0.1), 3.0);
  EXPECT_EQ(TestFunction::coordinate_of(0)(a, 0.1), 0.4);
  EXPECT_EQ(TestFunction::coordinate_of(1)(a, 0.1), 0.1);
  EXPECT_THROW(TestFunction::coordinate_of(2)(a, 0.1), InvalidArgument);
  EXPECT_NEAR(TestFunction::trig_in_b(1.0)(a, 0.25), 0.0, 1e-15);
  EXPECT_NEAR(TestFunction::trig_in_b(1.0, 2.0)(a, 0.25), -1.0, 1e-15);
  const auto box = TestFunction::indicator({0.0, -0.2}, {1.0, 0.2});
  EXPECT_EQ(box(a, 0.1), 1.0);
  EXPECT_EQ(box(a, 0.2), 1.0);
  EXPECT_EQ(box(a, 0.21), 0.0);
  const std::vector<double> neg{-0.1};
  EXPECT_EQ(box(neg, 0.0), 0.0);
  EXPECT_THROW(TestFunction::indicator({0.0}, {1.0}), InvalidArgument);
  EXPECT_EQ(TestFunction::constant().name(), "one");
  EXPECT_EQ(TestFunction::coordinate_of(0).name(), "a");
  EXPECT_EQ(TestFunction::trig_in_b(1.0).name(), "cos_b");
}

TEST(LocateCell, BoundariesGoToLowerCell) {
  const auto ax = axes(2.0, 4, 4);  // a cells of width 1, b cells of width 0.25
  const std::vector<double> a_edge{-1.0};
  EXPECT_EQ(locate_cell(ax, a_edge, 0.0), std::optional<std::size_t>(0 * 4 + 1));
  const std::vector<double> a_in{-0.5};
  EXPECT_EQ(locate_cell(ax, a_in, -0.3), std::optional<std::size_t>(1 * 4 + 0));
  EXPECT_EQ(locate_cell(ax, a_in, -0.25), std::optional<std::size_t>(1 * 4 + 0));
  EXPECT_EQ(locate_cell(ax, a_in, 0.0), std::optional<std::size_t>(1 * 4 + 1));
  const std::vector<double> lo{-2.0}, hi{2.0};
  EXPECT_EQ(locate_cell(ax, lo, -0.5), std::optional<std::size_t>(0));
  EXPECT_EQ(locate_cell(ax, hi, 0.49), std::optional<std::size_t>(3 * 4 + 3));
}

TEST(LocateCell, WrapsBAndRejectsOutsideA) {
  const auto ax = axes(2.0, 4, 4);
  const std::vector<double> a{0.5};
  EXPECT_EQ(locate_cell(ax, a, 0.1), locate_cell(ax, a, 3.1));
  EXPECT_EQ(locate_cell(ax, a, 0.1), locate_cell(ax, a, -1.9));
  const std::vector<double> out{2.0001};
  EXPECT_FALSE(locate_cell(ax, out, 0.0).has_value());
  const std::vector<double> wrong{0.0, 0.0};
  EXPECT_THROW(locate_cell(ax, wrong, 0.0), InvalidArgument);
}

TEST(LocateCell, EveryNodeFindsItsOwnCell) {
  GridAxes ax = axes(3.0, 6, 5);
  ax.dim = 2;
  std::vector<double> a(2);
  for (std::size_t ia = 0; ia < ax.a_count(); ++ia) {
    ax.a_vector(ia, a);
    for (int j = 0; j < ax.nb; ++j) EXPECT_EQ(locate_cell(ax, a, ax.b_node(j)), ia * ax.nb + j);
  }
}

TEST(Pairing, SingleAtomAgainstOne) {
  const AtomicDistribution g(1, 3.0, 1.0, {0.4}, {0.1}, {2.0});
  EXPECT_DOUBLE_EQ(pair_against_test_fn(g, TestFunction::constant()), 2.0 * g.mass_constant());
  EXPECT_DOUBLE_EQ(g.mass_constant(), 6.0);
}

TEST(Pairing, EmptyIndicatorGivesZero) {
  auto g = sample_uniform_atoms(1, 2.0, 1.0, 50, 3);
  for (auto& c : g.c) c = 1.0;
  EXPECT_EQ(pair_against_test_fn(g, TestFunction::indicator({5.0, 0.0}, {6.0, 0.1})), 0.0);
}

TEST(Pairing, LinearInCoefficientsAndTestFunction) {
  auto g = sample_uniform_atoms(1, 2.0, 1.0, 40, 5);
  std::mt19937_64 eng(1);
  std::normal_distribution<double> nd;
  for (auto& c : g.c) c = nd(eng);
  auto g2 = g;
  for (auto& c : g2.c) c *= -3.5;
  const auto h = TestFunction::coordinate_of(0);
  EXPECT_NEAR(pair_against_test_fn(g2, h), -3.5 * pair_against_test_fn(g, h), 1e-12);
  EXPECT_NEAR(pair_against_test_fn(g, TestFunction::constant(4.0)),
              4.0 * pair_against_test_fn(g, TestFunction::constant(1.0)), 1e-12);
}

TEST(Pairing, GridAndItsAtomsAgree) {
  const auto ax = axes(2.0, 8, 6);
  SpectrumGrid s(ax);
  for (std::size_t k = 0; k < s.values.size(); ++k) s.values[k] = std::sin(0.7 * static_cast<double>(k));
  const auto atoms = atoms_from_grid(s);
  for (const auto& h : {TestFunction::constant(), TestFunction::coordinate_of(0), TestFunction::trig_in_b(1.0),
                        TestFunction::indicator({-1.0, -0.2}, {0.5, 0.3})}) {
    EXPECT_NEAR(pair_against_test_fn(s, h), pair_against_test_fn(atoms, h), 1e-12) << h.name();
  }
}

TEST(Pairing, TabulatedTestFunctionIsInnerProduct) {
  const auto ax = axes(2.0, 8, 6);
  SpectrumGrid s(ax), t(ax);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    s.values[k] = std::cos(0.3 * static_cast<double>(k));
    t.values[k] = static_cast<double>(k % 5) - 2.0;
  }
  EXPECT_NEAR(pair_against_test_fn(s, TestFunction::tabulated(t)), s.inner(t), 1e-12);
}

TEST(Percentile, MatchesNumpyLinear) {
  // numpy.percentile([4, 1, 3, 2], q) for q = 0, 50, 80, 100
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0), 1.0);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 50), 2.5);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 80), 3.4);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 100), 4.0);
  EXPECT_DOUBLE_EQ(percentile({7}, 37), 7.0);
  EXPECT_THROW(percentile({}, 50), InvalidArgument);
  EXPECT_THROW(percentile({1, 2}, 101), InvalidArgument);
}

TEST(Compare, CloudOfTheSpectrumItself) {
  const auto ax = axes(2.0, 20, 10);
  const auto f = make_dataset(Generator::Sin2Pi, 400, 1, {0.0, Sampling::Midpoint});
  const auto spec = ridgelet_grid(f, kRelu, ax);
  const auto cloud = to_cloud(atoms_from_grid(spec));
  const auto same = compare_cloud_to_spectrum(cloud, spec, {TestFunction::constant()});
  EXPECT_GT(same.cosine, 0.99);
  EXPECT_DOUBLE_EQ(same.sign_agreement, 1.0);
  EXPECT_EQ(same.out_of_bounds, 0u);
  EXPECT_GE(same.compared_cells, ax.cell_count() / 5);
  EXPECT_NEAR(same.pairing_errors[0], 0.0, 1e-10);

  auto neg = cloud;
  for (auto& c : neg.c) c = -c;
  const auto flipped = compare_cloud_to_spectrum(neg, spec);
  EXPECT_LT(flipped.cosine, -0.99);
  EXPECT_DOUBLE_EQ(flipped.sign_agreement, 0.0);
}

TEST(Compare, CountsAtomsOutsideTheBox) {
  const auto ax = axes(1.0, 4, 4);
  SpectrumGrid spec(ax, std::vector<double>(ax.cell_count(), 1.0));
  ParameterCloud cloud;
  cloud.a = {0.2, 5.0, -3.0};
  cloud.b = {0.1, 0.0, 7.3};
  cloud.c = {1.0, 1.0, 1.0};
  const auto r = compare_cloud_to_spectrum(cloud, spec);
  EXPECT_EQ(r.out_of_bounds, 2u);
  EXPECT_EQ(std::accumulate(r.counts.begin(), r.counts.end(), std::size_t{0}), 1u);
  // histogram has unit Euclidean norm
  double n2 = 0.0;
  for (double v : r.histogram.values) n2 += v * v;
  EXPECT_NEAR(n2, 1.0, 1e-14);
}

TEST(Sweep, ZeroTargetGivesZeroEverywhere) {
  auto f = make_dataset(Generator::Sin2Pi, 100, 2, {0.0, Sampling::Stratified});
  f = f.with_targets(std::vector<double>(f.size(), 0.0));
  const auto ref = RidgeProblem::on_grid(kRelu, f, 0.01, axes(2.0, 20, 10));
  const auto rep = weak_convergence_sweep(ref, {10, 40}, {TestFunction::constant(), TestFunction::coordinate_of(0)}, 3);
  ASSERT_EQ(rep.entries.size(), 2u * 3u * 2u);
  for (double r : rep.reference) EXPECT_EQ(r, 0.0);
  for (const auto& e : rep.entries) EXPECT_EQ(e.value, 0.0);
}

TEST(Sweep, ErrorsShrinkWithWidth) {
  const auto f = make_dataset(Generator::Sin2Pi, 300, 2, {0.0, Sampling::Stratified});
  auto ref = RidgeProblem::on_grid(kRelu, f, 0.01, axes(3.0, 60, 40));
  ref.threads = 4;
  const std::vector<TestFunction> hs{TestFunction::constant(), TestFunction::coordinate_of(0),
                                     TestFunction::trig_in_b(1.0)};
  const auto rep = weak_convergence_sweep(ref, {25, 1600}, hs, 7);
  for (std::size_t h = 0; h < hs.size(); ++h) {
    EXPECT_LT(rep.median[1][h], rep.median[0][h]) << rep.h_names[h];
  }
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const auto f = make_dataset(Generator::Sin2Pi, 100, 4, {0.0, Sampling::Stratified});
  auto ref = RidgeProblem::on_grid(kRelu, f, 0.01, axes(2.0, 20, 10));
  ref.threads = 1;
  const auto a = weak_convergence_sweep(ref, {20, 80}, {TestFunction::constant()}, 4);
  ref.threads = 3;
  const auto b = weak_convergence_sweep(ref, {20, 80}, {TestFunction::constant()}, 4);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t k = 0; k < a.entries.size(); ++k) EXPECT_EQ(a.entries[k].value, b.entries[k].value);
}

TEST(Sweep, RejectsBadInput) {
  const auto f = make_dataset(Generator::Sin2Pi, 50, 4);
  const auto ref = RidgeProblem::on_grid(kRelu, f, 0.01, axes(2.0, 10, 10));
  EXPECT_THROW(weak_convergence_sweep(ref, {20, 10}, {TestFunction::constant()}, 2), InvalidArgument);
  EXPECT_THROW(weak_convergence_sweep(ref, {}, {TestFunction::constant()}, 2), InvalidArgument);
  EXPECT_THROW(weak_convergence_sweep(ref, {10}, {TestFunction::constant()}, 0), InvalidArgument);
  const auto atoms = RidgeProblem::on_atoms(kRelu, f, 0.01, sample_uniform_atoms(1, 2.0, 1.0, 10, 1));
  EXPECT_THROW(weak_convergence_sweep(atoms, {10}, {TestFunction::constant()}, 2), InvalidArgument);
}

TEST(Shear, BumpTranslationWithinSamplingError) {
  for (double mu : {-0.5, 0.5}) {
    const auto r = translation_shear_check(mu, 2000, 17, kRelu, axes(4.0, 16, 10), Sampling::Iid, 2);
    EXPECT_EQ(r.nodes, 160u);
    EXPECT_GT(r.rms_standard_error, 0.0);
    EXPECT_LT(r.rms_difference, 2.0 * r.rms_standard_error) << "mu=" << mu;
  }
}

TEST(Shear, ZeroShiftMidpointIsExact) {
  // Same nodes on both sides, so the difference is pure round-off.
  const auto r = translation_shear_check(0.0, 500, 3, kRelu, axes(3.0, 6, 6), Sampling::Midpoint);
  EXPECT_LT(r.rms_difference, 1e-12);
}

TEST(LineSingularity, SquareWaveLinesStandOut) {
  const auto f = make_dataset(Generator::SquareWave, 4000, 0, {0.0, Sampling::Midpoint});
  const auto spec = ridgelet_grid(f, kRelu, axes(5.0, 100, 100), 4);
  const std::vector<double> x0s{0.0, -0.5, 0.5};
  const auto r = line_singularity(spec, x0s);
  EXPECT_GT(r.ratio, 2.0);
  EXPECT_GT(r.on_line_mean, r.off_line_median);
}

TEST(LineSingularity, RejectsHigherDimensions) {
  GridAxes ax = axes(1.0, 4, 4);
  ax.dim = 2;
  const SpectrumGrid s(ax);
  const std::vector<double> x0s{0.0};
  EXPECT_THROW(line_singularity(s, x0s), InvalidArgument);
}
