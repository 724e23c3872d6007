#include "core/ridge_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace ridgelet {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using Vector = Eigen::VectorXd;

constexpr std::size_t kBlock = 2048;

// Phi_{ij} = sigma(a_j . x_i - b_j), materialized one block at a time.
class Design {
 public:
  explicit Design(const RidgeProblem& p) : act_(p.activation), data_(p.data), threads_(p.threads) {
    p.hidden_nodes(a_, b_);
    dim_ = static_cast<std::size_t>(p.data.dim());
  }

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return b_.size(); }

  // Columns [j0, j1) of Phi.
  Matrix column_block(std::size_t j0, std::size_t j1) const {
    Matrix P(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(j1 - j0));
    parallel_for(j1 - j0, threads_, [&](std::size_t k) {
      const std::size_t j = j0 + k;
      const std::span<const double> a(a_.data() + j * dim_, dim_);
      for (std::size_t i = 0; i < rows(); ++i) {
        P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = act_(dot(a, data_.input(i)) - b_[j]);
      }
    });
    return P;
  }

  // Rows [i0, i1) of Phi.
  Matrix row_block(std::size_t i0, std::size_t i1) const {
    Matrix P(static_cast<Eigen::Index>(i1 - i0), static_cast<Eigen::Index>(cols()));
    parallel_for(cols(), threads_, [&](std::size_t j) {
      const std::span<const double> a(a_.data() + j * dim_, dim_);
      for (std::size_t i = i0; i < i1; ++i) {
        P(static_cast<Eigen::Index>(i - i0), static_cast<Eigen::Index>(j)) = act_(dot(a, data_.input(i)) - b_[j]);
      }
    });
    return P;
  }

  Vector apply(const Vector& c) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(rows()));
    for (std::size_t j0 = 0; j0 < cols(); j0 += kBlock) {
      const std::size_t j1 = std::min(cols(), j0 + kBlock);
      out.noalias() += column_block(j0, j1) * c.segment(static_cast<Eigen::Index>(j0), static_cast<Eigen::Index>(j1 - j0));
    }
    return out;
  }

  Vector apply_transpose(const Vector& v) const {
    Vector out(static_cast<Eigen::Index>(cols()));
    for (std::size_t j0 = 0; j0 < cols(); j0 += kBlock) {
      const std::size_t j1 = std::min(cols(), j0 + kBlock);
      out.segment(static_cast<Eigen::Index>(j0), static_cast<Eigen::Index>(j1 - j0)).noalias() =
          column_block(j0, j1).transpose() * v;
    }
    return out;
  }

  // Phi Phi^T (N x N)
  Matrix outer_gram() const {
    Matrix K = Matrix::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(rows()));
    for (std::size_t j0 = 0; j0 < cols(); j0 += kBlock) {
      const std::size_t j1 = std::min(cols(), j0 + kBlock);
      K.selfadjointView<Eigen::Lower>().rankUpdate(column_block(j0, j1));
    }
    K.triangularView<Eigen::StrictlyUpper>() = K.transpose();
    return K;
  }

  // Phi^T Phi (C x C)
  Matrix inner_gram() const {
    Matrix M = Matrix::Zero(static_cast<Eigen::Index>(cols()), static_cast<Eigen::Index>(cols()));
    for (std::size_t i0 = 0; i0 < rows(); i0 += kBlock) {
      const std::size_t i1 = std::min(rows(), i0 + kBlock);
      M.selfadjointView<Eigen::Lower>().rankUpdate(row_block(i0, i1).transpose());
    }
    M.triangularView<Eigen::StrictlyUpper>() = M.transpose();
    return M;
  }

 private:
  const PeriodicActivation& act_;
  const Dataset& data_;
  int threads_;
  std::size_t dim_ = 1;
  std::vector<double> a_;
  std::vector<double> b_;
};

Vector targets_of(const Dataset& data) {
  Vector y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) y[static_cast<Eigen::Index>(i)] = data.target(i);
  return y;
}

struct Factored {
  Vector solution;
  double rcond = 0.0;
  bool jittered = false;
};

// Solves (beta I + G) x = rhs for symmetric positive semi-definite G.
Factored spd_solve(Matrix G, double beta, const Vector& rhs) {
  const Eigen::Index n = G.rows();
  G.diagonal().array() += beta;
  Factored out;
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-12 * G.trace() / static_cast<double>(n);
    G.diagonal().array() += jitter;
    llt.compute(G);
    out.jittered = true;
    if (llt.info() != Eigen::Success) {
      throw NumericError("ridge system is not positive definite", 0.0);
    }
  }
  out.rcond = llt.rcond();
  out.solution = llt.solve(rhs);
  if (!out.solution.allFinite()) throw NumericError("ridge solve produced non-finite values", out.rcond);
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_eigen(std::span<const double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[k];
  return out;
}

}  // namespace

RidgeProblem RidgeProblem::on_grid(PeriodicActivation act, Dataset data, double beta, GridAxes axes) {
  RidgeProblem p{std::move(act), std::move(data), beta};
  p.hidden = HiddenKind::Grid;
  p.axes = axes;
  p.validate();
  return p;
}

RidgeProblem RidgeProblem::on_atoms(PeriodicActivation act, Dataset data, double beta, AtomicDistribution atoms) {
  RidgeProblem p{std::move(act), std::move(data), beta};
  p.hidden = HiddenKind::Atoms;
  p.atoms = std::move(atoms);
  p.validate();
  return p;
}

void RidgeProblem::validate() const {
  if (!(beta > 0.0)) throw InvalidArgument("ridge problem needs beta > 0");
  if (data.empty()) throw InvalidArgument("ridge problem needs data");
  if (hidden == HiddenKind::Grid) {
    axes.validate();
    if (axes.dim != data.dim()) throw InvalidArgument("grid and dataset dimensions differ");
    if (axes.T != activation.period()) throw InvalidArgument("grid period differs from the activation period");
  } else {
    atoms.validate();
    if (atoms.dim != data.dim()) throw InvalidArgument("atoms and dataset dimensions differ");
    if (atoms.T != activation.period()) throw InvalidArgument("atom period differs from the activation period");
  }
}

std::size_t RidgeProblem::unknowns() const { return hidden == HiddenKind::Grid ? axes.cell_count() : atoms.size(); }

double RidgeProblem::cell_weight() const {
  return hidden == HiddenKind::Grid ? axes.cell_measure() : atoms.atom_mass();
}

double RidgeProblem::effective_beta() const {
  if (beta_schedule && hidden == HiddenKind::Atoms) return beta * (1.0 + 1.0 / static_cast<double>(atoms.size()));
  return beta;
}

void RidgeProblem::hidden_nodes(std::vector<double>& a, std::vector<double>& b) const {
  if (hidden == HiddenKind::Atoms) {
    a = atoms.a;
    b = atoms.b;
    return;
  }
  const auto m = static_cast<std::size_t>(axes.dim);
  a.assign(axes.cell_count() * m, 0.0);
  b.assign(axes.cell_count(), 0.0);
  std::vector<double> av(m);
  for (std::size_t ia = 0; ia < axes.a_count(); ++ia) {
    axes.a_vector(ia, av);
    for (int j = 0; j < axes.nb; ++j) {
      const std::size_t cell = ia * axes.nb + j;
      std::copy(av.begin(), av.end(), a.begin() + static_cast<std::ptrdiff_t>(cell * m));
      b[cell] = axes.b_node(j);
    }
  }
}

double kernel_entry(const PeriodicActivation& act, const Dataset& data, std::span<const double> a, double b,
                    std::span<const double> a2, double b2) {
  if (data.empty()) throw InvalidArgument("kernel of an empty dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    acc += act(dot(a, data.input(i)) - b) * act(dot(a2, data.input(i)) - b2);
  }
  return acc / static_cast<double>(data.size());
}

std::vector<double> model_outputs(const RidgeProblem& problem, std::span<const double> coefficients) {
  if (coefficients.size() != problem.unknowns()) throw InvalidArgument("coefficient count differs from unknowns");
  const Design phi(problem);
  Vector g = phi.apply(to_eigen(coefficients)) * problem.cell_weight();
  return to_std(g);
}

Objective evaluate_objective(const RidgeProblem& problem, std::span<const double> coefficients) {
  const auto g = model_outputs(problem, coefficients);
  Objective o;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = problem.data.target(i) - g[i];
    o.fit += r * r;
  }
  o.fit /= static_cast<double>(g.size());
  for (double c : coefficients) o.penalty += c * c;
  o.penalty *= problem.cell_weight();
  o.J = o.fit + problem.effective_beta() * o.penalty;
  return o;
}

std::vector<double> theoretical_minimizer_nodes(const RidgeProblem& problem) {
  const Design phi(problem);
  const double beta = problem.effective_beta();
  const auto& data = problem.data;
  Vector v(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    // weight 1/(N p) applied to p y / (beta + p)
    v[static_cast<Eigen::Index>(i)] = data.target(i) / (beta + data.density_at(i));
  }
  return to_std(phi.apply_transpose(v) / static_cast<double>(data.size()));
}

SpectrumGrid theoretical_minimizer(const Dataset& data, const PeriodicActivation& act, double beta,
                                   const GridAxes& axes, int threads) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  std::vector<double> shrunk(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double p = data.density_at(i);
    shrunk[i] = p * data.target(i) / (beta + p);
  }
  return ridgelet_grid(data.with_targets(std::move(shrunk)), act, axes, threads);
}

SolveReport solve_tikhonov(const RidgeProblem& problem) {
  problem.validate();
  const Design phi(problem);
  const double w = problem.cell_weight();
  const double beta = problem.effective_beta();
  const auto N = static_cast<double>(problem.data.size());
  const Vector y = targets_of(problem.data);
  const Vector r = phi.apply_transpose(y) / N;

  SolveReport rep;
  rep.beta = beta;
  rep.A = problem.A();
  Vector c;
  if (phi.cols() > phi.rows()) {
    rep.route = "dual";
    const auto f = spd_solve(phi.outer_gram() * (w / N), beta, y);
    c = phi.apply_transpose(f.solution) / N;
    rep.condition = f.rcond;
    rep.jittered = f.jittered;
  } else {
    rep.route = "primal";
    const auto f = spd_solve(phi.inner_gram() * (w / N), beta, r);
    c = f.solution;
    rep.condition = f.rcond;
    rep.jittered = f.jittered;
  }

  // Normal equations in primal form, evaluated matrix-free.
  const Vector phic = phi.apply(c);
  const Vector lhs = beta * c + phi.apply_transpose(phic) * (w / N);
  const double rnorm = r.norm();
  rep.normal_residual = rnorm > 0.0 ? (lhs - r).norm() / rnorm : (lhs - r).norm();

  rep.coefficients = to_std(c);
  Objective& o = rep.objective;
  o.fit = (y - w * phic).squaredNorm() / N;
  o.penalty = w * c.squaredNorm();
  o.J = o.fit + beta * o.penalty;

  const auto theo = theoretical_minimizer_nodes(problem);
  double d2 = 0.0;
  for (std::size_t j = 0; j < theo.size(); ++j) {
    const double d = rep.coefficients[j] - theo[j];
    d2 += d * d;
  }
  rep.delta_A_norm = std::sqrt(d2 * w);
  return rep;
}

MinimumNormPath minimum_norm_limit(const RidgeProblem& problem, const std::vector<double>& betas) {
  if (betas.empty()) throw InvalidArgument("need at least one beta");
  for (std::size_t k = 0; k < betas.size(); ++k) {
    if (!(betas[k] > 0.0)) throw InvalidArgument("betas must be positive");
    if (k > 0 && !(betas[k] < betas[k - 1])) throw InvalidArgument("betas must be strictly decreasing");
  }
  const Design phi(problem);
  const double w = problem.cell_weight();
  const Matrix P = phi.column_block(0, phi.cols()) * w;
  Eigen::BDCSVD<Matrix> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector pinv = svd.solve(targets_of(problem.data));

  MinimumNormPath out;
  out.pseudo_inverse = to_std(pinv);
  for (double beta : betas) {
    RidgeProblem step = problem;
    step.beta = beta;
    step.beta_schedule = false;
    auto rep = solve_tikhonov(step);
    out.distance.push_back((to_eigen(rep.coefficients) - pinv).norm());
    out.path.push_back(std::move(rep));
  }
  return out;
}

SolveReport implicit_reg_solve(const RidgeProblem& problem, std::span<const double> gamma_init) {
  if (gamma_init.size() != problem.unknowns()) throw InvalidArgument("gamma_init does not match the unknowns");
  const auto shifted = model_outputs(problem, gamma_init);
  std::vector<double> residual(problem.data.size());
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = problem.data.target(i) - shifted[i];

  RidgeProblem inner = problem;
  inner.data = problem.data.with_targets(std::move(residual));
  SolveReport rep = solve_tikhonov(inner);
  for (std::size_t j = 0; j < gamma_init.size(); ++j) rep.coefficients[j] += gamma_init[j];

  const auto fit = evaluate_objective(problem, rep.coefficients);
  double pen = 0.0;
  for (std::size_t j = 0; j < gamma_init.size(); ++j) {
    const double d = rep.coefficients[j] - gamma_init[j];
    pen += d * d;
  }
  rep.objective.fit = fit.fit;
  rep.objective.penalty = pen * problem.cell_weight();
  rep.objective.J = rep.objective.fit + problem.effective_beta() * rep.objective.penalty;
  return rep;
}

}  // namespace ridgelet
