// ridgelet command-line driver. Every run reads one JSON config, writes its
// outputs into --out and records a manifest.json that `replay` can rerun.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ridgelet/ridgelet.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3, kNumeric = 4 };

struct Failure : std::runtime_error {
  Failure(int code_, const std::string& what) : std::runtime_error(what), code(code_) {}
  int code;
};

int exit_for(rdg_status s) {
  switch (s) {
    case RDG_OK: return kOk;
    case RDG_INVALID_ARGUMENT:
    case RDG_ALIASING:
    case RDG_NOT_ADMISSIBLE: return kUsage;
    case RDG_IO: return kIo;
    case RDG_NUMERIC:
    case RDG_DIVERGED: return kNumeric;
    case RDG_INTERNAL: return kCheckFailed;
  }
  return kCheckFailed;
}

void check(rdg_status s, const std::string& context) {
  if (s != RDG_OK) throw Failure(exit_for(s), context + ": " + rdg_last_error_message());
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure(kUsage, msg); }

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};
using Activation = Handle<rdg_activation, rdg_activation_free>;
using Data = Handle<rdg_dataset, rdg_dataset_free>;
using Spectrum = Handle<rdg_spectrum, rdg_spectrum_free>;
using Solution = Handle<rdg_solution, rdg_solution_free>;
using Cloud = Handle<rdg_cloud, rdg_cloud_free>;
using Sweep = Handle<rdg_sweep, rdg_sweep_free>;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Failure(kIo, "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Failure(kIo, "cannot write '" + p.string() + "'");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Failure(kIo, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

template <class T>
T field(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    usage_error(std::string("config field \"") + key + "\": " + e.what());
  }
}

const json& section(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg.at(key).is_object()) usage_error(std::string("config needs an object \"") + key + "\"");
  return cfg.at(key);
}

struct Run {
  std::string subcommand;
  json config;
  fs::path out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> outputs;
  json extra = json::object();
  bool partial = false;

  fs::path path(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
};

// activation JSON, optionally normalized to self-admissibility ("normalize": true)
void load_activation(const json& j, int m, Activation& act) {
  if (!j.is_object()) usage_error("activation must be a JSON object");
  json plain = j;
  const bool normalize = field<bool>(j, "normalize", false);
  plain.erase("normalize");
  Activation raw;
  check(rdg_activation_from_json(plain.dump().c_str(), raw.out()), "activation");
  if (normalize) {
    check(rdg_activation_normalize(raw.get(), m, 64, 4096, act.out()), "normalize activation");
  } else {
    std::swap(raw.p, act.p);
  }
}

double activation_period(const json& j) { return field<double>(j, "T", 1.0); }

void load_dataset(const json& cfg, const Run& run, Data& data) {
  const json& d = section(cfg, "dataset");
  if (d.contains("file")) {
    const auto file = field<std::string>(d, "file", "");
    check(rdg_dataset_load_csv(file.c_str(), field<double>(d, "lo", -1.0), field<double>(d, "hi", 1.0), data.out()),
          "dataset");
    return;
  }
  rdg_dataset_spec spec;
  rdg_dataset_spec_default(&spec);
  const auto tag = field<std::string>(d, "tag", "sin2pi");
  const auto sampling = field<std::string>(d, "sampling", "iid");
  spec.tag = tag.c_str();
  spec.sampling = sampling.c_str();
  spec.n = field<std::size_t>(d, "n", 0);
  spec.mu = field<double>(d, "mu", 0.0);
  spec.lo = field<double>(d, "lo", -1.0);
  spec.hi = field<double>(d, "hi", 1.0);
  spec.seed = run.seed;
  check(rdg_dataset_generate(&spec, data.out()), "dataset");
}

rdg_grid load_grid(const json& cfg, double T, int m) {
  const json& g = section(cfg, "grid");
  rdg_grid grid{m, field<double>(g, "A", 5.0), T, field<int>(g, "na", 200), field<int>(g, "nb", 200)};
  return grid;
}

// ---- subcommands -------------------------------------------------------

int cmd_admissible(Run& run, bool pair, bool strict) {
  const json& cfg = run.config;
  const int m = field<int>(cfg, "m", 1);
  const int n_max = field<int>(cfg, "n_max", 64);
  const int q = field<int>(cfg, "q", 4096);
  Activation sigma;
  load_activation(section(cfg, "activation"), m, sigma);

  check(rdg_activation_write_coefficients(sigma.get(), n_max, q, run.path("coefficients.csv").c_str()),
        "coefficients");
  rdg_admissibility adm{};
  check(rdg_admissibility_check(sigma.get(), m, n_max, q, &adm), "admissibility");
  json report = {{"dc", {adm.dc_re, adm.dc_im}},
                 {"sum", adm.sum},
                 {"tail_bound", adm.tail_bound},
                 {"verdict", adm.admissible ? "admissible" : "not admissible"}};
  std::printf("sigma_hat(0)     = %.12g %+.12gi\n", adm.dc_re, adm.dc_im);
  std::printf("admissibility    = %.12g\n", adm.sum);
  std::printf("tail bound       = %.3g\n", adm.tail_bound);
  std::printf("verdict          = %s\n", adm.admissible ? "admissible" : "not admissible");
  bool ok = adm.admissible != 0;

  if (pair) {
    if (!cfg.contains("rho")) usage_error("--pair needs a \"rho\" activation in the config");
    Activation rho;
    load_activation(cfg.at("rho"), m, rho);
    rdg_pair_report pr{};
    check(rdg_pair_check(rho.get(), sigma.get(), m, n_max, q, &pr), "pair admissibility");
    const char* verdict = rdg_pair_verdict_string(pr.verdict);
    report["pair"] = {{"value", {pr.re, pr.im}}, {"dc_product", {pr.dc_re, pr.dc_im}}, {"verdict", verdict}};
    std::printf("pairing          = %.12g %+.12gi\n", pr.re, pr.im);
    std::printf("pair verdict     = %s\n", verdict);
    ok = pr.verdict == RDG_PAIR_ADMISSIBLE;
  }
  write_text(run.path("admissibility.json"), report.dump(2) + "\n");
  return (strict && !ok) ? kCheckFailed : kOk;
}

int cmd_spectrum(Run& run) {
  const json& cfg = run.config;
  const json& ja = section(cfg, "activation");
  Data data;
  load_dataset(cfg, run, data);
  const int m = rdg_dataset_dim(data.get());
  Activation act;
  load_activation(ja, m, act);
  const rdg_grid grid = load_grid(cfg, activation_period(ja), m);
  Spectrum s;
  check(rdg_spectrum_compute(data.get(), act.get(), &grid, run.threads, s.out()), "spectrum");
  check(rdg_spectrum_write_csv(s.get(), run.path("spectrum.csv").c_str()), "write spectrum");
  check(rdg_spectrum_write_ppm(s.get(), run.path("spectrum.ppm").c_str()), "write heatmap");
  check(rdg_spectrum_write_sidecar(s.get(), run.path("spectrum.json").c_str()), "write sidecar");
  return kOk;
}

int cmd_reconstruct(Run& run) {
  const json& cfg = run.config;
  Data data;
  load_dataset(cfg, run, data);
  const int m = rdg_dataset_dim(data.get());
  if (m != 1) usage_error("reconstruct writes one-dimensional query grids only");
  const json& js = section(cfg, "activation");
  Activation sigma, rho;
  load_activation(js, m, sigma);
  if (cfg.contains("rho")) {
    const json& jr = cfg.at("rho");
    if (field<bool>(jr, "normalize_against", false)) {
      json plain = jr;
      plain.erase("normalize_against");
      Activation raw;
      load_activation(plain, m, raw);
      check(rdg_activation_normalize_against(raw.get(), sigma.get(), m, 64, 4096, rho.out()), "normalize rho");
    } else {
      load_activation(jr, m, rho);
    }
  } else {
    load_activation(js, m, rho);
  }
  const rdg_grid grid = load_grid(cfg, activation_period(js), m);
  const json q = cfg.value("query", json::object());
  const double lo = field<double>(q, "lo", -1.0), hi = field<double>(q, "hi", 1.0);
  const auto count = field<std::size_t>(q, "count", 401);
  if (count < 2) usage_error("query count must be >= 2");
  std::vector<double> xs(count), out(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  rdg_pair_report pr{};
  check(rdg_reconstruct(data.get(), rho.get(), sigma.get(), &grid, xs.data(), count, run.threads, out.data(), &pr),
        "reconstruct");

  Data table;
  check(rdg_dataset_from_arrays(1, count, xs.data(), out.data(), lo, hi, table.out()), "reconstruction table");
  check(rdg_dataset_write_csv(table.get(), run.path("reconstruction.csv").c_str()), "write reconstruction");

  json report = {{"pairing", {pr.re, pr.im}}, {"pair_verdict", rdg_pair_verdict_string(pr.verdict)}};
  const json& d = section(cfg, "dataset");
  if (!d.contains("file")) {
    const auto tag = field<std::string>(d, "tag", "sin2pi");
    const double mu = field<double>(d, "mu", 0.0);
    double err = 0.0, norm = 0.0, out_norm = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double f = 0.0;
      check(rdg_generator_eval(tag.c_str(), xs[i], mu, &f), "generator");
      err += (out[i] - f) * (out[i] - f);
      norm += f * f;
      out_norm += out[i] * out[i];
    }
    report["relative_error"] = norm > 0.0 ? std::sqrt(err / norm) : std::sqrt(err);
    report["relative_output_norm"] = norm > 0.0 ? std::sqrt(out_norm / norm) : std::sqrt(out_norm);
  }
  write_text(run.path("reconstruction.json"), report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return kOk;
}

rdg_solve_spec load_solve_spec(const json& cfg, const Run& run, double T, int m) {
  rdg_solve_spec spec{};
  spec.beta = field<double>(cfg, "beta", 0.01);
  const auto hidden = field<std::string>(cfg, "hidden", "grid");
  if (hidden != "grid" && hidden != "atoms") usage_error("\"hidden\" must be grid or atoms");
  spec.hidden = hidden == "grid" ? RDG_HIDDEN_GRID : RDG_HIDDEN_ATOMS;
  spec.grid = load_grid(cfg, T, m);
  spec.atoms = field<std::size_t>(cfg, "atoms", 0);
  spec.beta_schedule = field<bool>(cfg, "beta_schedule", false) ? 1 : 0;
  spec.seed = run.seed;
  spec.threads = run.threads;
  return spec;
}

int cmd_solve(Run& run) {
  const json& cfg = run.config;
  const json& ja = section(cfg, "activation");
  Data data;
  load_dataset(cfg, run, data);
  const int m = rdg_dataset_dim(data.get());
  Activation act;
  load_activation(ja, m, act);
  const auto spec = load_solve_spec(cfg, run, activation_period(ja), m);
  Solution sol;
  check(rdg_solve(data.get(), act.get(), &spec, sol.out()), "solve");
  check(rdg_solution_write_csv(sol.get(), run.path("solution.csv").c_str()), "write solution");
  check(rdg_solution_write_report(sol.get(), run.path("solve.json").c_str()), "write report");
  if (spec.hidden == RDG_HIDDEN_GRID) {
    Spectrum theo;
    check(rdg_spectrum_theoretical(data.get(), act.get(), spec.beta, &spec.grid, run.threads, theo.out()),
          "theoretical minimizer");
    check(rdg_spectrum_write_csv(theo.get(), run.path("theoretical.csv").c_str()), "write theoretical");
    check(rdg_spectrum_write_sidecar(theo.get(), run.path("solution_grid.json").c_str()), "write sidecar");
  }
  rdg_solve_summary sum{};
  check(rdg_solution_summary(sol.get(), &sum), "summary");
  std::printf("J = %.10g  fit = %.10g  penalty = %.10g  delta_A = %.6g  route = %s\n", sum.J, sum.fit, sum.penalty,
              sum.delta_A_norm, sum.dual ? "dual" : "primal");
  return kOk;
}

int cmd_train(Run& run) {
  const json& cfg = run.config;
  Data data;
  load_dataset(cfg, run, data);
  const int m = rdg_dataset_dim(data.get());
  Activation act;
  load_activation(section(cfg, "activation"), m, act);
  rdg_train_config tc;
  rdg_train_config_default(&tc);
  const json t = cfg.value("train", json::object());
  tc.eta = field<double>(t, "eta", tc.eta);
  tc.beta = field<double>(t, "beta", tc.beta);
  tc.batch = field<std::size_t>(t, "batch", tc.batch);
  tc.epochs = field<std::size_t>(t, "epochs", tc.epochs);
  tc.ensemble = field<std::size_t>(t, "ensemble", tc.ensemble);
  tc.units = field<std::size_t>(t, "units", tc.units);
  tc.init_lo = field<double>(t, "init_lo", tc.init_lo);
  tc.init_hi = field<double>(t, "init_hi", tc.init_hi);
  tc.freeze_hidden = field<bool>(t, "freeze_hidden", false) ? 1 : 0;
  const auto decay = field<std::string>(t, "decay", "all");
  if (decay != "all" && decay != "outer-clip") usage_error("\"decay\" must be all or outer-clip");
  tc.decay_outer_only = decay == "outer-clip" ? 1 : 0;
  tc.clip_A = field<double>(t, "clip_A", tc.clip_A);
  tc.seed = run.seed;
  tc.threads = run.threads;

  Cloud cloud;
  check(rdg_train(data.get(), act.get(), &tc, cloud.out()), "train");
  check(rdg_cloud_write_csv(cloud.get(), run.path("cloud.csv").c_str()), "write cloud");

  const double* losses = nullptr;
  std::size_t n_losses = 0;
  check(rdg_cloud_losses(cloud.get(), &losses, &n_losses), "losses");
  const std::size_t* excluded = nullptr;
  std::size_t n_excluded = 0;
  check(rdg_cloud_excluded(cloud.get(), &excluded, &n_excluded), "excluded");
  json jl = json::array();
  for (std::size_t r = 0; r < n_losses; ++r) jl.push_back(std::isfinite(losses[r]) ? json(losses[r]) : json(nullptr));
  const json report = {{"final_losses", jl},
                       {"excluded", std::vector<std::size_t>(excluded, excluded + n_excluded)},
                       {"units", rdg_cloud_size(cloud.get())}};
  write_text(run.path("train.json"), report.dump(2) + "\n");
  run.extra["excluded_replicas"] = n_excluded;
  run.partial = n_excluded > 0;
  std::printf("pooled %zu units, %zu replica(s) excluded\n", rdg_cloud_size(cloud.get()), n_excluded);
  return kOk;
}

int cmd_compare(Run& run) {
  const json& cfg = run.config;
  const double T = field<double>(cfg, "T", 1.0);
  if (!cfg.contains("cloud")) usage_error("compare needs \"cloud\" (path to a cloud CSV)");
  Cloud cloud;
  check(rdg_cloud_load_csv(field<std::string>(cfg, "cloud", "").c_str(), T, cloud.out()), "cloud");

  Spectrum spectrum;
  if (cfg.contains("spectrum")) {
    const auto csv = field<std::string>(cfg, "spectrum", "");
    const auto sidecar = field<std::string>(cfg, "sidecar", fs::path(csv).replace_extension(".json").string());
    rdg_grid grid{};
    check(rdg_grid_from_sidecar(sidecar.c_str(), &grid), "grid sidecar");
    check(rdg_spectrum_load_csv(csv.c_str(), &grid, spectrum.out()), "spectrum");
  } else {
    Data data;
    load_dataset(cfg, run, data);
    const int m = rdg_dataset_dim(data.get());
    const json& ja = section(cfg, "activation");
    Activation act;
    load_activation(ja, m, act);
    const rdg_grid grid = load_grid(cfg, activation_period(ja), m);
    check(rdg_spectrum_compute(data.get(), act.get(), &grid, run.threads, spectrum.out()), "spectrum");
    check(rdg_spectrum_write_csv(spectrum.get(), run.path("spectrum.csv").c_str()), "write spectrum");
  }
  rdg_comparison c{};
  check(rdg_compare(cloud.get(), spectrum.get(), &c), "compare");
  const json report = {{"similarity", c.similarity},
                       {"sign_agreement", c.sign_agreement},
                       {"compared_cells", c.compared_cells},
                       {"out_of_bounds", c.out_of_bounds}};
  write_text(run.path("compare.json"), report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return kOk;
}

int cmd_sweep(Run& run) {
  const json& cfg = run.config;
  const json& ja = section(cfg, "activation");
  Data data;
  load_dataset(cfg, run, data);
  const int m = rdg_dataset_dim(data.get());
  Activation act;
  load_activation(ja, m, act);
  auto ref = load_solve_spec(cfg, run, activation_period(ja), m);
  ref.hidden = RDG_HIDDEN_GRID;
  const auto ds = field<std::vector<std::size_t>>(cfg, "ds", {50, 200, 800, 3200});
  const auto tests = field<std::vector<std::string>>(cfg, "tests", {"one", "a", "cos_b"});
  std::vector<const char*> names;
  for (const auto& t : tests) names.push_back(t.c_str());
  const rdg_sweep_spec spec{ds.data(), ds.size(), field<std::size_t>(cfg, "trials", 10), names.data(), names.size()};
  Sweep sweep;
  check(rdg_sweep_run(data.get(), act.get(), &ref, &spec, sweep.out()), "sweep");
  check(rdg_sweep_write_csv(sweep.get(), run.path("sweep.csv").c_str()), "write sweep");
  check(rdg_sweep_write_report(sweep.get(), run.path("sweep.json").c_str()), "write sweep report");
  for (std::size_t di = 0; di < ds.size(); ++di) {
    std::printf("d=%-6zu", ds[di]);
    for (std::size_t h = 0; h < tests.size(); ++h) {
      double med = 0.0;
      check(rdg_sweep_median(sweep.get(), di, h, &med), "median");
      std::printf("  %s: %.4g", tests[h].c_str(), med);
    }
    std::printf("\n");
  }
  return kOk;
}

// Input paths in a config are made absolute so a manifest can be replayed
// from any working directory.
void absolutize_paths(json& cfg) {
  for (const char* key : {"cloud", "spectrum", "sidecar"}) {
    if (cfg.contains(key) && cfg[key].is_string()) cfg[key] = fs::absolute(cfg[key].get<std::string>()).string();
  }
  if (cfg.contains("dataset") && cfg["dataset"].is_object() && cfg["dataset"].contains("file")) {
    cfg["dataset"]["file"] = fs::absolute(cfg["dataset"]["file"].get<std::string>()).string();
  }
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int execute(Run& run, bool pair, bool strict) {
  fs::create_directories(run.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  std::string error;
  try {
    if (run.subcommand == "admissible") code = cmd_admissible(run, pair, strict);
    else if (run.subcommand == "spectrum") code = cmd_spectrum(run);
    else if (run.subcommand == "reconstruct") code = cmd_reconstruct(run);
    else if (run.subcommand == "solve") code = cmd_solve(run);
    else if (run.subcommand == "train") code = cmd_train(run);
    else if (run.subcommand == "compare") code = cmd_compare(run);
    else if (run.subcommand == "sweep") code = cmd_sweep(run);
    else usage_error("unknown subcommand '" + run.subcommand + "'");
  } catch (const Failure& f) {
    if (f.code == kUsage) throw;
    code = f.code;
    error = f.what();
    run.partial = true;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json outputs = json::array();
  for (const auto& name : run.outputs) {
    const fs::path p = run.out_dir / name;
    if (!fs::exists(p)) continue;
    const std::string bytes = read_text(p);
    outputs.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
  }
  json manifest = {{"subcommand", run.subcommand},
                   {"config", run.config},
                   {"seed", run.seed},
                   {"threads", run.threads},
                   {"version", rdg_version()},
                   {"wall_clock", {{"started_utc", timestamp_utc()}, {"seconds", seconds}}},
                   {"outputs", outputs},
                   {"status", code == kOk ? (run.partial ? "partial" : "ok") : "failed"}};
  if (!error.empty()) manifest["error"] = error;
  for (auto& [k, v] : run.extra.items()) manifest[k] = v;
  write_text(run.out_dir / "manifest.json", manifest.dump(2) + "\n");
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  return code;
}

json load_config(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    usage_error("malformed config '" + path + "': " + e.what());
  }
}

int replay(const std::string& manifest_path, const std::string& out, int threads_override, bool have_threads) {
  json manifest = load_config(manifest_path);
  Run run;
  try {
    run.subcommand = manifest.at("subcommand").get<std::string>();
    run.config = manifest.at("config");
    run.seed = manifest.at("seed").get<std::uint64_t>();
    run.threads = have_threads ? threads_override : manifest.value("threads", 1);
  } catch (const json::exception& e) {
    usage_error(std::string("malformed manifest: ") + e.what());
  }
  run.out_dir = out.empty() ? fs::path(manifest_path).parent_path() / "replay" : fs::path(out);
  const bool pair = run.config.value("__pair", false);
  const bool strict = run.config.value("__strict", false);
  const int code = execute(run, pair, strict);
  if (code != kOk) return code;

  int mismatches = 0;
  for (const auto& o : manifest.at("outputs")) {
    const auto name = o.at("file").get<std::string>();
    if (fs::path(name).extension() != ".csv") continue;
    const fs::path p = run.out_dir / name;
    const std::string now = fs::exists(p) ? sha256_hex(read_text(p)) : "missing";
    const bool same = now == o.at("sha256").get<std::string>();
    mismatches += !same;
    std::printf("%-24s %s\n", name.c_str(), same ? "identical" : "DIFFERS");
  }
  return mismatches ? kCheckFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ridgelet spectra, ridge solves and network training on the torus"};
  app.set_version_flag("--version", std::string(rdg_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", manifest_path;
  std::uint64_t seed = 0;
  int threads = 1;
  bool pair = false, strict = false;

  std::vector<CLI::App*> runs;
  const std::pair<const char*, const char*> commands[] = {
      {"admissible", "Fourier coefficients and admissibility of an activation (or pair)"},
      {"spectrum", "ridgelet spectrum of a dataset on a grid, as CSV and PPM"},
      {"reconstruct", "S[R[f]] at query points and its relative error"},
      {"solve", "Tikhonov ridge solve on a grid or on random atoms"},
      {"train", "SGD ensemble training; pooled parameter cloud"},
      {"compare", "trained cloud against a spectrum"},
      {"sweep", "weak-convergence sweep over atom counts"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "override the worker count (0 = all cores)");
    sub->add_option("-o,--out", out_dir, "output directory");
    runs.push_back(sub);
  }
  runs[0]->add_flag("--pair", pair, "check the (rho, activation) pair from the config's \"rho\"");
  runs[0]->add_flag("--strict", strict, "exit non-zero when the verdict is not admissible");

  auto* rep = app.add_subcommand("replay", "rerun a manifest and compare CSV hashes");
  rep->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  rep->add_option("--threads", threads, "worker count for the rerun");
  std::string replay_out;
  rep->add_option("-o,--out", replay_out, "output directory (default: <manifest dir>/replay)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (rep->parsed()) return replay(manifest_path, replay_out, threads, rep->count("--threads") > 0);

    CLI::App* sub = app.get_subcommands().front();
    Run run;
    run.subcommand = sub->get_name();
    run.config = load_config(config_path);
    if (!run.config.is_object()) usage_error("config must be a JSON object");
    absolutize_paths(run.config);
    run.seed = sub->count("--seed") ? seed : field<std::uint64_t>(run.config, "seed", 0);
    run.threads = sub->count("--threads") ? threads : field<int>(run.config, "threads", 1);
    run.config["seed"] = run.seed;
    run.config.erase("threads");
    if (pair) run.config["__pair"] = true;
    if (strict) run.config["__strict"] = true;
    run.out_dir = sub->count("--out") ? out_dir : field<std::string>(run.config, "out", out_dir);
    run.config.erase("out");
    return execute(run, pair, strict);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
