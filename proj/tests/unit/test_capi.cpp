#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ridgelet/ridgelet.h"

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

rdg_activation* make(const char* json) {
  rdg_activation* a = nullptr;
  EXPECT_EQ(rdg_activation_from_json(json, &a), RDG_OK) << rdg_last_error_message();
  return a;
}

rdg_dataset* sine_data(size_t n, const char* sampling = "stratified") {
  rdg_dataset_spec spec;
  rdg_dataset_spec_default(&spec);
  spec.n = n;
  spec.seed = 7;
  spec.sampling = sampling;
  rdg_dataset* d = nullptr;
  EXPECT_EQ(rdg_dataset_generate(&spec, &d), RDG_OK) << rdg_last_error_message();
  return d;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("rdg_capi_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_GT(std::string(rdg_version()).size(), 0u);
  EXPECT_STREQ(rdg_status_string(RDG_OK), "ok");
  EXPECT_STREQ(rdg_status_string(RDG_INVALID_ARGUMENT), "invalid argument");
  EXPECT_STRNE(rdg_pair_verdict_string(RDG_PAIR_ADMISSIBLE), rdg_pair_verdict_string(RDG_PAIR_DEGENERATE));
}

TEST(CApi, FreeAcceptsNull) {
  rdg_activation_free(nullptr);
  rdg_dataset_free(nullptr);
  rdg_spectrum_free(nullptr);
  rdg_solution_free(nullptr);
  rdg_cloud_free(nullptr);
  rdg_sweep_free(nullptr);
  rdg_string_free(nullptr);
}

TEST(CApi, NullArgumentsAreRejected) {
  rdg_activation* a = nullptr;
  EXPECT_EQ(rdg_activation_from_json(nullptr, &a), RDG_INVALID_ARGUMENT);
  EXPECT_EQ(a, nullptr);
  EXPECT_EQ(rdg_dataset_generate(nullptr, nullptr), RDG_INVALID_ARGUMENT);
  EXPECT_GT(std::string(rdg_last_error_message()).size(), 0u);
}

TEST(CApi, MissingPeriodNamesTheField) {
  rdg_activation* a = nullptr;
  EXPECT_EQ(rdg_activation_from_json(R"({"kind":"periodic-relu"})", &a), RDG_INVALID_ARGUMENT);
  EXPECT_NE(std::string(rdg_last_error_message()).find("\"T\""), std::string::npos);
  EXPECT_EQ(rdg_activation_from_json("{not json", &a), RDG_INVALID_ARGUMENT);
  EXPECT_EQ(rdg_activation_create("swish", 1.0, 1.0, 0.0, 1.0, &a), RDG_INVALID_ARGUMENT);
}

TEST(CApi, ReluEvaluatesClosedForm) {
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  for (double t : {-0.4, -0.1, 0.0, 0.2, 0.45, 1.2}) {
    const double w = t - std::floor(t + 0.5);
    EXPECT_NEAR(rdg_activation_eval(relu, t), std::max(w, 0.0) - 0.125, 1e-15) << t;
  }
  char* js = nullptr;
  ASSERT_EQ(rdg_activation_to_json(relu, &js), RDG_OK);
  rdg_activation* back = make(js);
  EXPECT_EQ(rdg_activation_eval(back, 0.3), rdg_activation_eval(relu, 0.3));
  rdg_string_free(js);
  rdg_activation_free(back);
  rdg_activation_free(relu);
}

TEST(CApi, AdmissibilityAndNormalization) {
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  rdg_admissibility adm{};
  ASSERT_EQ(rdg_admissibility_check(relu, 1, 64, 4096, &adm), RDG_OK);
  // mean zero but not yet scaled to unit sum
  EXPECT_EQ(adm.admissible, 0);
  EXPECT_NEAR(adm.dc_re, 0.0, 1e-12);
  EXPECT_GT(adm.sum, 0.0);
  rdg_activation* norm = nullptr;
  ASSERT_EQ(rdg_activation_normalize(relu, 1, 64, 4096, &norm), RDG_OK);
  rdg_pair_report pair{};
  ASSERT_EQ(rdg_pair_check(norm, norm, 1, 64, 4096, &pair), RDG_OK);
  EXPECT_NEAR(pair.re, 1.0, 1e-9);
  EXPECT_EQ(pair.verdict, RDG_PAIR_ADMISSIBLE);
  ASSERT_EQ(rdg_admissibility_check(norm, 1, 64, 4096, &adm), RDG_OK);
  EXPECT_EQ(adm.admissible, 1);
  rdg_activation_free(norm);
  rdg_activation_free(relu);

  rdg_activation* flat = nullptr;
  ASSERT_EQ(rdg_activation_create("cosine", 1.0, 0.0, 0.0, 1.0, &flat), RDG_OK);
  EXPECT_EQ(rdg_activation_normalize(flat, 1, 16, 256, &norm), RDG_NOT_ADMISSIBLE);
  rdg_activation_free(flat);
}

TEST(CApi, NormalizeAgainstGivesUnitPairing) {
  rdg_activation* sigma = make(R"({"kind":"periodic-relu","T":1})");
  rdg_activation* rho = make(R"({"kind":"sine","T":1})");
  rdg_activation* out = nullptr;
  ASSERT_EQ(rdg_activation_normalize_against(rho, sigma, 1, 64, 4096, &out), RDG_OK) << rdg_last_error_message();
  rdg_pair_report pair{};
  ASSERT_EQ(rdg_pair_check(out, sigma, 1, 64, 4096, &pair), RDG_OK);
  EXPECT_NEAR(pair.re, 1.0, 1e-9);
  rdg_activation_free(out);
  rdg_activation_free(rho);
  rdg_activation_free(sigma);
}

TEST(CApi, GeneratorAndDatasetBasics) {
  double v = 0.0;
  ASSERT_EQ(rdg_generator_eval("sin2pi", 0.25, 0.0, &v), RDG_OK);
  EXPECT_NEAR(v, 1.0, 1e-15);
  EXPECT_EQ(rdg_generator_eval("nope", 0.25, 0.0, &v), RDG_INVALID_ARGUMENT);

  rdg_dataset_spec spec;
  rdg_dataset_spec_default(&spec);
  rdg_dataset* d = nullptr;
  ASSERT_EQ(rdg_dataset_generate(&spec, &d), RDG_OK);
  EXPECT_EQ(rdg_dataset_size(d), 1000u);
  EXPECT_EQ(rdg_dataset_dim(d), 1);
  rdg_dataset_free(d);

  spec.tag = "topologist-sine";
  ASSERT_EQ(rdg_dataset_generate(&spec, &d), RDG_OK);
  EXPECT_EQ(rdg_dataset_size(d), 10000u);
  rdg_dataset_free(d);

  spec.sampling = "sobol";
  EXPECT_EQ(rdg_dataset_generate(&spec, &d), RDG_INVALID_ARGUMENT);
}

TEST(CApi, DatasetCsvRoundTrip) {
  TempDir tmp;
  const double x[] = {-0.5, 0.0, 0.5};
  const double y[] = {1.0, 2.0, 3.0};
  rdg_dataset* d = nullptr;
  ASSERT_EQ(rdg_dataset_from_arrays(1, 3, x, y, -1.0, 1.0, &d), RDG_OK);
  ASSERT_EQ(rdg_dataset_write_csv(d, tmp.file("d.csv").c_str()), RDG_OK);
  rdg_dataset* back = nullptr;
  ASSERT_EQ(rdg_dataset_load_csv(tmp.file("d.csv").c_str(), -1.0, 1.0, &back), RDG_OK);
  EXPECT_EQ(rdg_dataset_size(back), 3u);
  rdg_dataset_free(back);
  rdg_dataset_free(d);
  EXPECT_EQ(rdg_dataset_load_csv(tmp.file("missing.csv").c_str(), -1.0, 1.0, &back), RDG_IO);
}

TEST(CApi, SpectrumIsLinearInRhoAmplitude) {
  rdg_dataset* d = sine_data(300);
  rdg_activation* r1 = nullptr;
  rdg_activation* r3 = nullptr;
  ASSERT_EQ(rdg_activation_create("sine", 1.0, 1.0, 0.0, 1.0, &r1), RDG_OK);
  ASSERT_EQ(rdg_activation_create("sine", 1.0, 1.0, 0.0, 3.0, &r3), RDG_OK);
  const rdg_grid g{1, 2.0, 1.0, 8, 6};
  rdg_spectrum* s1 = nullptr;
  rdg_spectrum* s3 = nullptr;
  ASSERT_EQ(rdg_spectrum_compute(d, r1, &g, 1, &s1), RDG_OK);
  ASSERT_EQ(rdg_spectrum_compute(d, r3, &g, 2, &s3), RDG_OK);
  const double* v1 = nullptr;
  const double* v3 = nullptr;
  size_t n1 = 0, n3 = 0;
  ASSERT_EQ(rdg_spectrum_values(s1, &v1, &n1), RDG_OK);
  ASSERT_EQ(rdg_spectrum_values(s3, &v3, &n3), RDG_OK);
  ASSERT_EQ(n1, 48u);
  ASSERT_EQ(n3, 48u);
  for (size_t k = 0; k < n1; ++k) EXPECT_NEAR(v3[k], 3.0 * v1[k], 1e-12);
  rdg_grid back{};
  ASSERT_EQ(rdg_spectrum_get_grid(s1, &back), RDG_OK);
  EXPECT_EQ(back.na, 8);
  EXPECT_EQ(back.nb, 6);
  rdg_spectrum_free(s1);
  rdg_spectrum_free(s3);
  rdg_activation_free(r1);
  rdg_activation_free(r3);
  rdg_dataset_free(d);
}

TEST(CApi, SpectrumFilesRoundTrip) {
  TempDir tmp;
  rdg_dataset* d = sine_data(200);
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  const rdg_grid g{1, 3.0, 1.0, 6, 4};
  rdg_spectrum* s = nullptr;
  ASSERT_EQ(rdg_spectrum_compute(d, relu, &g, 1, &s), RDG_OK);
  ASSERT_EQ(rdg_spectrum_write_csv(s, tmp.file("s.csv").c_str()), RDG_OK);
  ASSERT_EQ(rdg_spectrum_write_sidecar(s, tmp.file("s.json").c_str()), RDG_OK);
  ASSERT_EQ(rdg_spectrum_write_ppm(s, tmp.file("s.ppm").c_str()), RDG_OK);
  EXPECT_EQ(slurp(tmp.file("s.ppm")).substr(0, 2), "P6");
  rdg_grid g2{};
  ASSERT_EQ(rdg_grid_from_sidecar(tmp.file("s.json").c_str(), &g2), RDG_OK);
  EXPECT_EQ(g2.A, 3.0);
  EXPECT_EQ(g2.na, 6);
  rdg_spectrum* back = nullptr;
  ASSERT_EQ(rdg_spectrum_load_csv(tmp.file("s.csv").c_str(), &g2, &back), RDG_OK);
  const double* a = nullptr;
  const double* b = nullptr;
  size_t na = 0, nb = 0;
  rdg_spectrum_values(s, &a, &na);
  rdg_spectrum_values(back, &b, &nb);
  ASSERT_EQ(na, nb);
  for (size_t k = 0; k < na; ++k) EXPECT_EQ(a[k], b[k]);
  const rdg_grid wrong{1, 3.0, 1.0, 7, 4};
  rdg_spectrum* bad = nullptr;
  EXPECT_EQ(rdg_spectrum_load_csv(tmp.file("s.csv").c_str(), &wrong, &bad), RDG_IO);
  rdg_spectrum_free(back);
  rdg_spectrum_free(s);
  rdg_activation_free(relu);
  rdg_dataset_free(d);
}

TEST(CApi, ReconstructsSine) {
  rdg_dataset* d = sine_data(1000);
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  rdg_activation* norm = nullptr;
  ASSERT_EQ(rdg_activation_normalize(relu, 1, 64, 4096, &norm), RDG_OK);
  const rdg_grid g{1, 5.0, 1.0, 200, 200};
  std::vector<double> xs, out(101);
  for (int i = 0; i <= 100; ++i) xs.push_back(-1.0 + 0.02 * i);
  rdg_pair_report pair{};
  ASSERT_EQ(rdg_reconstruct(d, norm, norm, &g, xs.data(), xs.size(), 4, out.data(), &pair), RDG_OK);
  EXPECT_EQ(pair.verdict, RDG_PAIR_ADMISSIBLE);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double f = std::sin(2 * kPi * xs[i]);
    num += (out[i] - f) * (out[i] - f);
    den += f * f;
  }
  EXPECT_LT(std::sqrt(num / den), 0.1);
  rdg_activation_free(norm);
  rdg_activation_free(relu);
  rdg_dataset_free(d);
}

TEST(CApi, SolveLargeBetaGivesScaledTransform) {
  // With beta = p the theoretical minimizer is R[p f / (beta + p)] = R[f] / 2.
  rdg_dataset* d = sine_data(400);
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  const rdg_grid g{1, 2.0, 1.0, 10, 8};
  rdg_spectrum* th = nullptr;
  rdg_spectrum* r = nullptr;
  ASSERT_EQ(rdg_spectrum_theoretical(d, relu, 0.5, &g, 1, &th), RDG_OK);
  ASSERT_EQ(rdg_spectrum_compute(d, relu, &g, 1, &r), RDG_OK);
  const double* tv = nullptr;
  const double* rv = nullptr;
  size_t n = 0;
  rdg_spectrum_values(th, &tv, &n);
  rdg_spectrum_values(r, &rv, &n);
  for (size_t k = 0; k < n; ++k) EXPECT_NEAR(tv[k], 0.5 * rv[k], 1e-12);
  rdg_spectrum_free(th);
  rdg_spectrum_free(r);
  rdg_activation_free(relu);
  rdg_dataset_free(d);
}

TEST(CApi, SolveGridAndAtoms) {
  TempDir tmp;
  rdg_dataset* d = sine_data(200);
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  rdg_solve_spec spec{};
  spec.beta = 0.01;
  spec.hidden = RDG_HIDDEN_GRID;
  spec.grid = {1, 3.0, 1.0, 12, 10};
  spec.threads = 2;
  rdg_solution* sol = nullptr;
  ASSERT_EQ(rdg_solve(d, relu, &spec, &sol), RDG_OK) << rdg_last_error_message();
  rdg_solve_summary sum{};
  ASSERT_EQ(rdg_solution_summary(sol, &sum), RDG_OK);
  EXPECT_NEAR(sum.J, sum.fit + sum.beta * sum.penalty, 1e-12 * std::max(1.0, sum.J));
  EXPECT_LT(sum.normal_residual, 1e-8);
  EXPECT_EQ(sum.A, 3.0);
  const double* c = nullptr;
  size_t nc = 0;
  ASSERT_EQ(rdg_solution_coefficients(sol, &c, &nc), RDG_OK);
  EXPECT_EQ(nc, 120u);
  ASSERT_EQ(rdg_solution_write_csv(sol, tmp.file("sol.csv").c_str()), RDG_OK);
  ASSERT_EQ(rdg_solution_write_report(sol, tmp.file("sol.json").c_str()), RDG_OK);
  EXPECT_EQ(slurp(tmp.file("sol.csv")).substr(0, 10), "a,b,value\n");
  EXPECT_NE(slurp(tmp.file("sol.json")).find("\"J\""), std::string::npos);
  rdg_solution_free(sol);

  spec.hidden = RDG_HIDDEN_ATOMS;
  spec.atoms = 500;
  spec.seed = 3;
  ASSERT_EQ(rdg_solve(d, relu, &spec, &sol), RDG_OK);
  ASSERT_EQ(rdg_solution_summary(sol, &sum), RDG_OK);
  EXPECT_EQ(sum.dual, 1);  // 500 unknowns > 200 samples
  ASSERT_EQ(rdg_solution_write_csv(sol, tmp.file("atoms.csv").c_str()), RDG_OK);
  EXPECT_EQ(slurp(tmp.file("atoms.csv")).substr(0, 6), "a,b,c\n");
  rdg_solution_free(sol);

  spec.beta = -1.0;
  EXPECT_EQ(rdg_solve(d, relu, &spec, &sol), RDG_INVALID_ARGUMENT);
  rdg_activation_free(relu);
  rdg_dataset_free(d);
}

TEST(CApi, TrainDeterministicAcrossThreads) {
  rdg_dataset* d = sine_data(200);
  rdg_activation* act = make(R"({"kind":"periodic-gaussian","T":1})");
  rdg_train_config cfg;
  rdg_train_config_default(&cfg);
  cfg.units = 20;
  cfg.epochs = 5;
  cfg.ensemble = 3;
  cfg.seed = 11;
  cfg.threads = 1;
  rdg_cloud* a = nullptr;
  rdg_cloud* b = nullptr;
  ASSERT_EQ(rdg_train(d, act, &cfg, &a), RDG_OK) << rdg_last_error_message();
  cfg.threads = 3;
  ASSERT_EQ(rdg_train(d, act, &cfg, &b), RDG_OK);
  EXPECT_EQ(rdg_cloud_size(a), 60u);
  const double* la = nullptr;
  const double* lb = nullptr;
  size_t na = 0, nb = 0;
  ASSERT_EQ(rdg_cloud_losses(a, &la, &na), RDG_OK);
  ASSERT_EQ(rdg_cloud_losses(b, &lb, &nb), RDG_OK);
  ASSERT_EQ(na, 3u);
  for (size_t k = 0; k < na; ++k) EXPECT_EQ(la[k], lb[k]);
  const size_t* ex = nullptr;
  size_t nex = 99;
  ASSERT_EQ(rdg_cloud_excluded(a, &ex, &nex), RDG_OK);
  EXPECT_EQ(nex, 0u);

  TempDir tmp;
  ASSERT_EQ(rdg_cloud_write_csv(a, tmp.file("c.csv").c_str()), RDG_OK);
  ASSERT_EQ(rdg_cloud_write_csv(b, tmp.file("d.csv").c_str()), RDG_OK);
  EXPECT_EQ(slurp(tmp.file("c.csv")), slurp(tmp.file("d.csv")));
  rdg_cloud* back = nullptr;
  ASSERT_EQ(rdg_cloud_load_csv(tmp.file("c.csv").c_str(), 1.0, &back), RDG_OK);
  EXPECT_EQ(rdg_cloud_size(back), 60u);
  rdg_cloud_free(back);

  cfg.batch = 10000;
  rdg_cloud* bad = nullptr;
  EXPECT_EQ(rdg_train(d, act, &cfg, &bad), RDG_INVALID_ARGUMENT);
  rdg_cloud_free(a);
  rdg_cloud_free(b);
  rdg_activation_free(act);
  rdg_dataset_free(d);
}

TEST(CApi, CompareSpectrumWithItsOwnAtoms) {
  TempDir tmp;
  rdg_dataset* d = sine_data(300);
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  const rdg_grid g{1, 2.0, 1.0, 20, 10};
  rdg_spectrum* s = nullptr;
  ASSERT_EQ(rdg_spectrum_compute(d, relu, &g, 1, &s), RDG_OK);
  // one atom per cell centre carrying the spectrum value
  const double* v = nullptr;
  size_t n = 0;
  rdg_spectrum_values(s, &v, &n);
  {
    std::ofstream out(tmp.file("cloud.csv"));
    out << "a,b,c\n";
    out.precision(17);
    for (int i = 0; i < g.na; ++i) {
      for (int j = 0; j < g.nb; ++j) {
        out << (-g.A + (i + 0.5) * 2 * g.A / g.na) << "," << (-0.5 + (j + 0.5) / g.nb) << "," << v[i * g.nb + j]
            << "\n";
      }
    }
  }
  rdg_cloud* cloud = nullptr;
  ASSERT_EQ(rdg_cloud_load_csv(tmp.file("cloud.csv").c_str(), 1.0, &cloud), RDG_OK);
  rdg_comparison cmp{};
  ASSERT_EQ(rdg_compare(cloud, s, &cmp), RDG_OK);
  EXPECT_GT(cmp.similarity, 0.999);
  EXPECT_EQ(cmp.sign_agreement, 1.0);
  EXPECT_EQ(cmp.out_of_bounds, 0u);
  rdg_cloud_free(cloud);
  rdg_spectrum_free(s);
  rdg_activation_free(relu);
  rdg_dataset_free(d);
}

TEST(CApi, SweepRunsAndReports) {
  TempDir tmp;
  rdg_dataset* d = sine_data(200);
  rdg_activation* relu = make(R"({"kind":"periodic-relu","T":1})");
  rdg_solve_spec ref{};
  ref.beta = 0.01;
  ref.hidden = RDG_HIDDEN_GRID;
  ref.grid = {1, 2.0, 1.0, 20, 20};
  ref.threads = 2;
  const size_t ds[] = {20, 400};
  const char* tests[] = {"one", "a", "cos_b"};
  const rdg_sweep_spec spec{ds, 2, 5, tests, 3};
  rdg_sweep* sw = nullptr;
  ASSERT_EQ(rdg_sweep_run(d, relu, &ref, &spec, &sw), RDG_OK) << rdg_last_error_message();
  double m = -1.0;
  ASSERT_EQ(rdg_sweep_median(sw, 1, 2, &m), RDG_OK);
  EXPECT_GE(m, 0.0);
  EXPECT_EQ(rdg_sweep_median(sw, 2, 0, &m), RDG_INVALID_ARGUMENT);
  ASSERT_EQ(rdg_sweep_write_csv(sw, tmp.file("sweep.csv").c_str()), RDG_OK);
  const auto text = slurp(tmp.file("sweep.csv"));
  EXPECT_EQ(text.substr(0, 16), "d,h,trial,error\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 5 * 3);
  ASSERT_EQ(rdg_sweep_write_report(sw, tmp.file("sweep.json").c_str()), RDG_OK);
  rdg_sweep_free(sw);

  const char* bad_tests[] = {"zeta"};
  const rdg_sweep_spec bad{ds, 2, 5, bad_tests, 1};
  EXPECT_EQ(rdg_sweep_run(d, relu, &ref, &bad, &sw), RDG_INVALID_ARGUMENT);
  rdg_activation_free(relu);
  rdg_dataset_free(d);
}
