#include "ridgelet/ridgelet.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "core/activation.hpp"
#include "core/convergence.hpp"
#include "core/dataset.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/ridge_solver.hpp"
#include "core/rng.hpp"
#include "core/spectrum.hpp"
#include "core/training.hpp"

namespace rl = ridgelet;

struct rdg_activation {
  rl::PeriodicActivation act;
};
struct rdg_dataset {
  rl::Dataset data;
};
struct rdg_spectrum {
  rl::SpectrumGrid grid;
};
struct rdg_solution {
  rl::SolveReport report;
  rl::HiddenKind hidden;
  rl::GridAxes axes;
  rl::AtomicDistribution atoms;
};
struct rdg_cloud {
  rl::ParameterCloud cloud;
  std::vector<double> losses;
  std::vector<size_t> excluded;
};
struct rdg_sweep {
  rl::SweepReport report;
};

namespace {

thread_local std::string last_error;

template <class Fn>
rdg_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return RDG_OK;
  } catch (const rl::AliasingError& e) {
    last_error = e.what();
    return RDG_ALIASING;
  } catch (const rl::InvalidArgument& e) {
    last_error = e.what();
    return RDG_INVALID_ARGUMENT;
  } catch (const rl::NotAdmissibleError& e) {
    last_error = e.what();
    return RDG_NOT_ADMISSIBLE;
  } catch (const rl::DivergedError& e) {
    last_error = e.what();
    return RDG_DIVERGED;
  } catch (const rl::NumericError& e) {
    last_error = e.what();
    return RDG_NUMERIC;
  } catch (const rl::IoError& e) {
    last_error = e.what();
    return RDG_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RDG_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RDG_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw rl::InvalidArgument(std::string(what) + " must not be NULL");
}

rl::GridAxes to_axes(const rdg_grid* g) {
  require(g, "grid");
  rl::GridAxes ax{g->dim, g->A, g->T, g->na, g->nb};
  ax.validate();
  return ax;
}

rdg_grid from_axes(const rl::GridAxes& ax) { return {ax.dim, ax.A, ax.T, ax.na, ax.nb}; }

rdg_pair_report to_pair(const rl::PairReport& p) {
  return {p.value.real(), p.value.imag(), p.dc_product.real(), p.dc_product.imag(),
          static_cast<rdg_pair_verdict>(p.verdict)};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rl::RidgeProblem make_problem(const rl::Dataset& data, const rl::PeriodicActivation& act, const rdg_solve_spec* spec) {
  require(spec, "solve spec");
  rl::RidgeProblem p = [&] {
    if (spec->hidden == RDG_HIDDEN_GRID) return rl::RidgeProblem::on_grid(act, data, spec->beta, to_axes(&spec->grid));
    if (spec->atoms == 0) throw rl::InvalidArgument("atomic problem needs at least one atom");
    auto atoms = rl::sample_uniform_atoms(spec->grid.dim, spec->grid.A, spec->grid.T, spec->atoms,
                                          rl::derive_seed(spec->seed, spec->atoms));
    return rl::RidgeProblem::on_atoms(act, data, spec->beta, std::move(atoms));
  }();
  p.beta_schedule = spec->beta_schedule != 0;
  p.seed = spec->seed;
  p.threads = spec->threads;
  return p;
}

rl::TestFunction test_function(const std::string& name, double T) {
  if (name == "one") return rl::TestFunction::constant(1.0);
  if (name == "a") return rl::TestFunction::coordinate_of(0);
  if (name == "cos_b") return rl::TestFunction::trig_in_b(T);
  throw rl::InvalidArgument("unknown test function '" + name + "' (expected one, a, cos_b)");
}

}  // namespace

extern "C" {

const char* rdg_version(void) { return RIDGELET_VERSION; }

const char* rdg_last_error_message(void) { return last_error.c_str(); }

const char* rdg_status_string(rdg_status status) {
  switch (status) {
    case RDG_OK: return "ok";
    case RDG_INVALID_ARGUMENT: return "invalid argument";
    case RDG_ALIASING: return "aliasing";
    case RDG_NOT_ADMISSIBLE: return "not admissible";
    case RDG_NUMERIC: return "numeric failure";
    case RDG_DIVERGED: return "diverged";
    case RDG_IO: return "i/o failure";
    case RDG_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rdg_string_free(char* s) { std::free(s); }

rdg_status rdg_activation_create(const char* kind, double T, double k, double offset, double amplitude,
                                 rdg_activation** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    const auto parsed = rl::activation_kind_from_string(kind);
    if (parsed == rl::ActivationKind::Tabulated) throw rl::InvalidArgument("tabulated activations need JSON input");
    *out = new rdg_activation{rl::PeriodicActivation(parsed, T, k, offset, amplitude)};
  });
}

rdg_status rdg_activation_from_json(const char* json, rdg_activation** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    rl::io::json j;
    try {
      j = rl::io::json::parse(json);
    } catch (const rl::io::json::exception& e) {
      throw rl::InvalidArgument(std::string("malformed activation JSON: ") + e.what());
    }
    *out = new rdg_activation{rl::io::activation_from_json(j)};
  });
}

rdg_status rdg_activation_to_json(const rdg_activation* act, char** out) {
  return guarded([&] {
    require(act, "activation");
    require(out, "out");
    *out = dup_string(rl::io::activation_to_json(act->act).dump());
  });
}

void rdg_activation_free(rdg_activation* act) { delete act; }

double rdg_activation_eval(const rdg_activation* act, double t) { return act ? act->act(t) : 0.0; }

rdg_status rdg_activation_normalize(const rdg_activation* act, int m, int n_max, int q, rdg_activation** out) {
  return guarded([&] {
    require(act, "activation");
    require(out, "out");
    *out = new rdg_activation{rl::normalize_to_admissible(act->act, m, n_max, q)};
  });
}

rdg_status rdg_activation_normalize_against(const rdg_activation* rho, const rdg_activation* sigma, int m, int n_max,
                                           int q, rdg_activation** out) {
  return guarded([&] {
    require(rho, "rho");
    require(sigma, "sigma");
    require(out, "out");
    *out = new rdg_activation{rl::normalize_against(rho->act, sigma->act, m, n_max, q)};
  });
}

rdg_status rdg_admissibility_check(const rdg_activation* act, int m, int n_max, int q, rdg_admissibility* out) {
  return guarded([&] {
    require(act, "activation");
    require(out, "out");
    const auto r = rl::check_admissibility(act->act, m, n_max, q);
    *out = {r.dc.real(), r.dc.imag(), r.sum, r.tail_bound, r.admissible ? 1 : 0};
  });
}

rdg_status rdg_pair_check(const rdg_activation* rho, const rdg_activation* sigma, int m, int n_max, int q,
                          rdg_pair_report* out) {
  return guarded([&] {
    require(rho, "rho");
    require(sigma, "sigma");
    require(out, "out");
    *out = to_pair(rl::check_pair(rho->act, sigma->act, m, n_max, q));
  });
}

const char* rdg_pair_verdict_string(rdg_pair_verdict verdict) {
  switch (verdict) {
    case RDG_PAIR_ADMISSIBLE: return "admissible pair";
    case RDG_PAIR_DEGENERATE: return "degenerate pair";
    case RDG_PAIR_NOT_NORMALIZED: return "not admissible pair";
  }
  return "unknown";
}

rdg_status rdg_activation_write_coefficients(const rdg_activation* act, int n_max, int q, const char* path) {
  return guarded([&] {
    require(act, "activation");
    require(path, "path");
    rl::io::write_file(path, rl::io::coefficients_csv(rl::fourier_coefficients(act->act, n_max, q)));
  });
}

void rdg_dataset_spec_default(rdg_dataset_spec* spec) {
  if (spec == nullptr) return;
  *spec = {"sin2pi", 0, 0, 0.0, "iid", -1.0, 1.0};
}

rdg_status rdg_dataset_generate(const rdg_dataset_spec* spec, rdg_dataset** out) {
  return guarded([&] {
    require(spec, "dataset spec");
    require(spec->tag, "tag");
    require(out, "out");
    const auto tag = rl::generator_from_string(spec->tag);
    rl::DatasetOptions opts;
    opts.mu = spec->mu;
    opts.sampling = spec->sampling ? rl::sampling_from_string(spec->sampling) : rl::Sampling::Iid;
    opts.lo = spec->lo;
    opts.hi = spec->hi;
    const size_t n = spec->n ? spec->n : rl::default_sample_count(tag);
    *out = new rdg_dataset{rl::make_dataset(tag, n, spec->seed, opts)};
  });
}

rdg_status rdg_dataset_from_arrays(int dim, size_t n, const double* x, const double* y, double lo, double hi,
                                   rdg_dataset** out) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    if (dim < 1) throw rl::InvalidArgument("dimension must be >= 1");
    rl::Density d;
    d.lo = lo;
    d.hi = hi;
    std::vector<double> xs(x, x + n * static_cast<size_t>(dim));
    std::vector<double> ys(y, y + n);
    *out = new rdg_dataset{rl::Dataset(dim, std::move(xs), std::move(ys), std::move(d))};
  });
}

rdg_status rdg_dataset_load_csv(const char* path, double lo, double hi, rdg_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto t = rl::io::parse_xy_csv(rl::io::read_file(path));
    rl::Density d;
    d.lo = lo;
    d.hi = hi;
    *out = new rdg_dataset{rl::Dataset(t.dim, std::move(t.x), std::move(t.y), std::move(d))};
  });
}

rdg_status rdg_dataset_write_csv(const rdg_dataset* data, const char* path) {
  return guarded([&] {
    require(data, "dataset");
    require(path, "path");
    rl::io::write_file(path, rl::io::xy_csv(data->data.inputs(), data->data.targets(), data->data.dim()));
  });
}

size_t rdg_dataset_size(const rdg_dataset* data) { return data ? data->data.size() : 0; }

int rdg_dataset_dim(const rdg_dataset* data) { return data ? data->data.dim() : 0; }

void rdg_dataset_free(rdg_dataset* data) { delete data; }

rdg_status rdg_generator_eval(const char* tag, double x, double mu, double* out) {
  return guarded([&] {
    require(tag, "tag");
    require(out, "out");
    *out = rl::generator_value(rl::generator_from_string(tag), x, mu);
  });
}

rdg_status rdg_spectrum_compute(const rdg_dataset* data, const rdg_activation* rho, const rdg_grid* grid, int threads,
                                rdg_spectrum** out) {
  return guarded([&] {
    require(data, "dataset");
    require(rho, "activation");
    require(out, "out");
    *out = new rdg_spectrum{rl::ridgelet_grid(data->data, rho->act, to_axes(grid), threads)};
  });
}

rdg_status rdg_spectrum_theoretical(const rdg_dataset* data, const rdg_activation* act, double beta,
                                    const rdg_grid* grid, int threads, rdg_spectrum** out) {
  return guarded([&] {
    require(data, "dataset");
    require(act, "activation");
    require(out, "out");
    *out = new rdg_spectrum{rl::theoretical_minimizer(data->data, act->act, beta, to_axes(grid), threads)};
  });
}

rdg_status rdg_spectrum_load_csv(const char* path, const rdg_grid* grid, rdg_spectrum** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rdg_spectrum{rl::io::parse_spectrum_csv(rl::io::read_file(path), to_axes(grid))};
  });
}

rdg_status rdg_spectrum_write_csv(const rdg_spectrum* s, const char* path) {
  return guarded([&] {
    require(s, "spectrum");
    require(path, "path");
    rl::io::write_file(path, rl::io::spectrum_csv(s->grid));
  });
}

rdg_status rdg_spectrum_write_ppm(const rdg_spectrum* s, const char* path) {
  return guarded([&] {
    require(s, "spectrum");
    require(path, "path");
    rl::io::write_file(path, rl::io::spectrum_ppm(s->grid));
  });
}

rdg_status rdg_spectrum_write_sidecar(const rdg_spectrum* s, const char* path) {
  return guarded([&] {
    require(s, "spectrum");
    require(path, "path");
    rl::io::write_file(path, rl::io::axes_to_json(s->grid.axes).dump(2) + "\n");
  });
}

rdg_status rdg_grid_from_sidecar(const char* path, rdg_grid* out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    rl::io::json j;
    try {
      j = rl::io::json::parse(rl::io::read_file(path));
    } catch (const rl::io::json::exception& e) {
      throw rl::InvalidArgument(std::string("malformed grid sidecar: ") + e.what());
    }
    *out = from_axes(rl::io::axes_from_json(j));
  });
}

rdg_status rdg_spectrum_values(const rdg_spectrum* s, const double** values, size_t* count) {
  return guarded([&] {
    require(s, "spectrum");
    require(values, "values");
    require(count, "count");
    *values = s->grid.values.data();
    *count = s->grid.values.size();
  });
}

rdg_status rdg_spectrum_get_grid(const rdg_spectrum* s, rdg_grid* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = from_axes(s->grid.axes);
  });
}

void rdg_spectrum_free(rdg_spectrum* s) { delete s; }

rdg_status rdg_spectrum_apply(const rdg_spectrum* s, const rdg_activation* sigma, const double* xs, size_t count,
                              int threads, double* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(sigma, "sigma");
    require(xs, "xs");
    require(out, "out");
    const auto dim = static_cast<size_t>(s->grid.axes.dim);
    const auto v = rl::apply_S_grid(s->grid, sigma->act, {xs, count * dim}, threads);
    std::copy(v.begin(), v.end(), out);
  });
}

rdg_status rdg_reconstruct(const rdg_dataset* data, const rdg_activation* rho, const rdg_activation* sigma,
                           const rdg_grid* grid, const double* xs, size_t count, int threads, double* out,
                           rdg_pair_report* pairing) {
  return guarded([&] {
    require(data, "dataset");
    require(rho, "rho");
    require(sigma, "sigma");
    require(xs, "xs");
    require(out, "out");
    const auto ax = to_axes(grid);
    const auto r = rl::reconstruct(data->data, rho->act, sigma->act, ax, {xs, count * static_cast<size_t>(ax.dim)},
                                   threads);
    std::copy(r.values.begin(), r.values.end(), out);
    if (pairing) *pairing = to_pair(r.pairing);
  });
}

rdg_status rdg_solve(const rdg_dataset* data, const rdg_activation* act, const rdg_solve_spec* spec,
                     rdg_solution** out) {
  return guarded([&] {
    require(data, "dataset");
    require(act, "activation");
    require(out, "out");
    const auto problem = make_problem(data->data, act->act, spec);
    auto sol = std::make_unique<rdg_solution>(rdg_solution{rl::solve_tikhonov(problem), problem.hidden,
                                                            problem.axes, problem.atoms});
    if (sol->hidden == rl::HiddenKind::Atoms) sol->atoms.c = sol->report.coefficients;
    *out = sol.release();
  });
}

rdg_status rdg_solution_summary(const rdg_solution* sol, rdg_solve_summary* out) {
  return guarded([&] {
    require(sol, "solution");
    require(out, "out");
    const auto& r = sol->report;
    *out = {r.objective.J, r.objective.fit, r.objective.penalty, r.delta_A_norm, r.condition,
            r.normal_residual, r.beta, r.A, r.route == "dual" ? 1 : 0};
  });
}

rdg_status rdg_solution_coefficients(const rdg_solution* sol, const double** values, size_t* count) {
  return guarded([&] {
    require(sol, "solution");
    require(values, "values");
    require(count, "count");
    *values = sol->report.coefficients.data();
    *count = sol->report.coefficients.size();
  });
}

rdg_status rdg_solution_write_csv(const rdg_solution* sol, const char* path) {
  return guarded([&] {
    require(sol, "solution");
    require(path, "path");
    if (sol->hidden == rl::HiddenKind::Grid) {
      rl::io::write_file(path, rl::io::spectrum_csv(rl::SpectrumGrid(sol->axes, sol->report.coefficients)));
    } else {
      rl::io::write_file(path, rl::io::cloud_csv(rl::to_cloud(sol->atoms)));
    }
  });
}

rdg_status rdg_solution_write_report(const rdg_solution* sol, const char* path) {
  return guarded([&] {
    require(sol, "solution");
    require(path, "path");
    rl::io::write_file(path, rl::io::solve_report_json(sol->report).dump(2) + "\n");
  });
}

void rdg_solution_free(rdg_solution* sol) { delete sol; }

void rdg_train_config_default(rdg_train_config* cfg) {
  if (cfg == nullptr) return;
  const rl::TrainConfig d;
  *cfg = {d.eta, d.beta, d.batch, d.epochs, d.ensemble, d.units, d.init_lo, d.init_hi, d.seed,
          d.freeze_hidden ? 1 : 0, d.decay == rl::DecayMode::OuterClip ? 1 : 0, d.clip_A, d.threads};
}

rdg_status rdg_train(const rdg_dataset* data, const rdg_activation* act, const rdg_train_config* cfg, rdg_cloud** out) {
  return guarded([&] {
    require(data, "dataset");
    require(act, "activation");
    require(cfg, "config");
    require(out, "out");
    rl::TrainConfig c;
    c.eta = cfg->eta;
    c.beta = cfg->beta;
    c.batch = cfg->batch;
    c.epochs = cfg->epochs;
    c.ensemble = cfg->ensemble;
    c.units = cfg->units;
    c.init_lo = cfg->init_lo;
    c.init_hi = cfg->init_hi;
    c.seed = cfg->seed;
    c.freeze_hidden = cfg->freeze_hidden != 0;
    c.decay = cfg->decay_outer_only ? rl::DecayMode::OuterClip : rl::DecayMode::All;
    c.clip_A = cfg->clip_A;
    c.threads = cfg->threads;
    auto res = rl::train_ensemble(data->data, c, act->act);
    if (res.excluded.size() == c.ensemble) throw rl::NumericError("every replica diverged");
    *out = new rdg_cloud{std::move(res.cloud), std::move(res.final_losses),
                         std::vector<size_t>(res.excluded.begin(), res.excluded.end())};
  });
}

size_t rdg_cloud_size(const rdg_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

rdg_status rdg_cloud_losses(const rdg_cloud* cloud, const double** losses, size_t* count) {
  return guarded([&] {
    require(cloud, "cloud");
    require(losses, "losses");
    require(count, "count");
    *losses = cloud->losses.data();
    *count = cloud->losses.size();
  });
}

rdg_status rdg_cloud_excluded(const rdg_cloud* cloud, const size_t** replicas, size_t* count) {
  return guarded([&] {
    require(cloud, "cloud");
    require(replicas, "replicas");
    require(count, "count");
    *replicas = cloud->excluded.data();
    *count = cloud->excluded.size();
  });
}

rdg_status rdg_cloud_load_csv(const char* path, double T, rdg_cloud** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rdg_cloud{rl::io::parse_cloud_csv(rl::io::read_file(path), T), {}, {}};
  });
}

rdg_status rdg_cloud_write_csv(const rdg_cloud* cloud, const char* path) {
  return guarded([&] {
    require(cloud, "cloud");
    require(path, "path");
    rl::io::write_file(path, rl::io::cloud_csv(cloud->cloud));
  });
}

void rdg_cloud_free(rdg_cloud* cloud) { delete cloud; }

rdg_status rdg_compare(const rdg_cloud* cloud, const rdg_spectrum* spectrum, rdg_comparison* out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(spectrum, "spectrum");
    require(out, "out");
    const auto r = rl::compare_cloud_to_spectrum(cloud->cloud, spectrum->grid);
    *out = {r.cosine, r.sign_agreement, r.compared_cells, r.out_of_bounds};
  });
}

rdg_status rdg_sweep_run(const rdg_dataset* data, const rdg_activation* act, const rdg_solve_spec* reference,
                         const rdg_sweep_spec* spec, rdg_sweep** out) {
  return guarded([&] {
    require(data, "dataset");
    require(act, "activation");
    require(reference, "reference");
    require(spec, "sweep spec");
    require(out, "out");
    if (reference->hidden != RDG_HIDDEN_GRID) throw rl::InvalidArgument("sweep reference must be a grid problem");
    require(spec->ds, "ds");
    require(spec->tests, "tests");
    const auto problem = make_problem(data->data, act->act, reference);
    std::vector<size_t> ds(spec->ds, spec->ds + spec->n_ds);
    std::vector<rl::TestFunction> hs;
    for (size_t k = 0; k < spec->n_tests; ++k) {
      require(spec->tests[k], "test function name");
      hs.push_back(test_function(spec->tests[k], problem.period()));
    }
    *out = new rdg_sweep{rl::weak_convergence_sweep(problem, ds, hs, spec->trials)};
  });
}

rdg_status rdg_sweep_median(const rdg_sweep* sweep, size_t d_index, size_t test_index, double* out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(out, "out");
    const auto& m = sweep->report.median;
    if (d_index >= m.size() || test_index >= m[d_index].size()) throw rl::InvalidArgument("sweep index out of range");
    *out = m[d_index][test_index];
  });
}

rdg_status rdg_sweep_write_csv(const rdg_sweep* sweep, const char* path) {
  return guarded([&] {
    require(sweep, "sweep");
    require(path, "path");
    rl::io::write_file(path, rl::io::sweep_csv(sweep->report));
  });
}

rdg_status rdg_sweep_write_report(const rdg_sweep* sweep, const char* path) {
  return guarded([&] {
    require(sweep, "sweep");
    require(path, "path");
    rl::io::write_file(path, rl::io::sweep_json(sweep->report).dump(2) + "\n");
  });
}

void rdg_sweep_free(rdg_sweep* sweep) { delete sweep; }

}  // extern "C"
