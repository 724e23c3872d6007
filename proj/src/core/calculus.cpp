#include "core/calculus.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "core/errors.hpp"
#include "core/spectrum.hpp"

namespace ridgelet {

std::complex<double> fourier_slice(const SpectralDensity& f_hat, const FourierCoefficients& rho,
                                   std::span<const double> a, double b) {
  const double T = rho.period;
  std::vector<double> xi(a.size());
  std::complex<double> acc = 0.0;
  for (int n = -rho.n_max; n <= rho.n_max; ++n) {
    const std::complex<double> c = rho[n];
    if (c == 0.0) continue;
    const double w = 2.0 * std::numbers::pi * n / T;
    for (std::size_t k = 0; k < a.size(); ++k) xi[k] = w * a[k];
    acc += f_hat(xi) * c * std::polar(1.0, w * b);
  }
  return acc;
}

std::string_view to_string(CalculusIdentity id) {
  switch (id) {
    case CalculusIdentity::TranslateF: return "translate_f";
    case CalculusIdentity::ScaleF: return "scale_f";
    case CalculusIdentity::TranslateRho: return "translate_rho";
    case CalculusIdentity::ScaleRho: return "scale_rho";
    case CalculusIdentity::DerivativeRho: return "derivative_rho";
    case CalculusIdentity::Convolution: return "convolution";
  }
  return "unknown";
}

CalculusIdentity calculus_identity_from_string(std::string_view name) {
  for (auto id : {CalculusIdentity::TranslateF, CalculusIdentity::ScaleF, CalculusIdentity::TranslateRho,
                  CalculusIdentity::ScaleRho, CalculusIdentity::DerivativeRho, CalculusIdentity::Convolution}) {
    if (to_string(id) == name) return id;
  }
  throw InvalidArgument("unknown calculus identity '" + std::string(name) + "'");
}

PeriodicActivation circular_convolution(const PeriodicActivation& rho, const PeriodicActivation& sigma, int nodes) {
  if (nodes < 8) throw InvalidArgument("circular convolution needs at least 8 nodes");
  if (rho.period() != sigma.period()) throw InvalidArgument("convolution of activations with different periods");
  const double T = rho.period();
  const double h = T / nodes;
  std::vector<double> rho_mid(static_cast<std::size_t>(nodes));
  for (int l = 0; l < nodes; ++l) rho_mid[l] = rho(-0.5 * T + (l + 0.5) * h);
  std::vector<double> table(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const double t = -0.5 * T + j * h;
    double acc = 0.0;
    for (int l = 0; l < nodes; ++l) acc += rho_mid[l] * sigma(t - (-0.5 * T + (l + 0.5) * h));
    table[j] = acc * h;
  }
  return PeriodicActivation::tabulated(T, std::move(table));
}

namespace {

std::vector<double> scaled(std::span<const double> v, double s) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x *= s;
  return out;
}

IdentitySides convolution_sides(const Dataset& f, const PeriodicActivation& rho, const CalculusParams& p) {
  if (p.g == nullptr || !p.sigma) throw InvalidArgument("convolution identity needs g and sigma");
  const Dataset& g = *p.g;
  const PeriodicActivation& sigma = *p.sigma;
  if (g.dim() != f.dim()) throw InvalidArgument("convolution factors have different dimensions");
  const auto tau = circular_convolution(rho, sigma, p.convolution_nodes);

  // \int\int f(y) g(z) tau(a.(y+z) - b) dy dz over both sample sets
  IdentitySides r;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fi = f.weight(i) * f.target(i);
    if (fi == 0.0) continue;
    const double ay = dot(p.a, f.input(i));
    double inner = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      inner += g.weight(j) * g.target(j) * tau(ay + dot(p.a, g.input(j)) - p.b);
    }
    r.lhs += fi * inner;
  }

  const double T = rho.period();
  const int L = p.convolution_nodes;
  const double h = T / L;
  for (int k = 0; k < L; ++k) {
    const double bp = -0.5 * T + (k + 0.5) * h;
    r.rhs += ridgelet_point_with(f, rho, p.a, bp) * ridgelet_point_with(g, sigma, p.a, p.b - bp);
  }
  r.rhs *= h;
  return r;
}

}  // namespace

IdentitySides calculus_check(CalculusIdentity identity, const Dataset& f, const PeriodicActivation& rho,
                             const CalculusParams& p) {
  if (p.a.size() != static_cast<std::size_t>(f.dim())) throw InvalidArgument("a has wrong dimension");
  IdentitySides r;
  switch (identity) {
    case CalculusIdentity::TranslateF: {
      if (p.shift.size() != p.a.size()) throw InvalidArgument("shift has wrong dimension");
      r.lhs = ridgelet_point_with(f.translated(p.shift), rho, p.a, p.b);
      r.rhs = ridgelet_point_with(f, rho, p.a, p.b - dot(p.a, p.shift));
      return r;
    }
    case CalculusIdentity::ScaleF: {
      if (p.scale == 0.0) throw InvalidArgument("scale must be non-zero");
      r.lhs = ridgelet_point_with(f.dilated(p.scale), rho, p.a, p.b);
      r.rhs = ridgelet_point_with(f, rho, scaled(p.a, 1.0 / p.scale), p.b) /
              std::pow(std::abs(p.scale), f.dim());
      return r;
    }
    case CalculusIdentity::TranslateRho: {
      const double t0 = p.rho_shift;
      auto moved = [&](double t) { return rho(t - t0); };
      r.lhs = ridgelet_point_with(f, moved, p.a, p.b);
      r.rhs = ridgelet_point_with(f, rho, p.a, p.b + t0);
      return r;
    }
    case CalculusIdentity::ScaleRho: {
      const double s = p.scale;
      auto dilated = [&](double t) { return rho(s * t); };
      r.lhs = ridgelet_point_with(f, dilated, p.a, p.b);
      r.rhs = ridgelet_point_with(f, rho, scaled(p.a, s), s * p.b);
      return r;
    }
    case CalculusIdentity::DerivativeRho: {
      if (!(p.step > 0.0)) throw InvalidArgument("derivative step must be positive");
      auto prime = [&](double t) { return rho.derivative(t); };
      r.lhs = ridgelet_point_with(f, prime, p.a, p.b);
      const double up = ridgelet_point_with(f, rho, p.a, p.b + p.step);
      const double down = ridgelet_point_with(f, rho, p.a, p.b - p.step);
      r.rhs = -(up - down) / (2.0 * p.step);
      return r;
    }
    case CalculusIdentity::Convolution: return convolution_sides(f, rho, p);
  }
  throw InvalidArgument("unknown calculus identity");
}

}  // namespace ridgelet
