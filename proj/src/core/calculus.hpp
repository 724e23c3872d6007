#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/activation.hpp"
#include "core/dataset.hpp"

namespace ridgelet {

// f#(xi) = \int f(x) exp(-i xi.x) dx
using SpectralDensity = std::function<std::complex<double>(std::span<const double> xi)>;

/// R[f](a,b) = sum_{|n|<=n_max} f#(w_n a) rho(n) exp(i w_n b), w_n = 2 pi n / T,
/// with rho(n) in the (1/T) \int rho exp(+i w_n t) convention of FourierCoefficients.
std::complex<double> fourier_slice(const SpectralDensity& f_hat, const FourierCoefficients& rho,
                                   std::span<const double> a, double b);

enum class CalculusIdentity { TranslateF, ScaleF, TranslateRho, ScaleRho, DerivativeRho, Convolution };
std::string_view to_string(CalculusIdentity id);
CalculusIdentity calculus_identity_from_string(std::string_view name);

struct CalculusParams {
  std::vector<double> a{1.0};
  double b = 0.0;
  std::vector<double> shift{0.0};  // translate_f: y
  double scale = 1.0;               // scale_f / scale_rho: s
  double rho_shift = 0.0;           // translate_rho: t
  double step = 1e-5;               // derivative_rho: central difference in b
  // convolution: second factor g with ridgelet function sigma
  const Dataset* g = nullptr;
  std::optional<PeriodicActivation> sigma;
  int convolution_nodes = 1024;     // torus nodes for rho*sigma and the b-integral
};

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of a ridgelet calculus identity at (a, b):
///   translate_f    R[f(.-y)](a,b)          vs R[f](a, b - a.y)
///   scale_f        R[f(s.)](a,b)           vs R[f](a/s, b) / |s|^m
///   translate_rho  R[f; rho(.-t)](a,b)     vs R[f; rho](a, b+t)
///   scale_rho      R[f; rho(s.)](a,b)      vs R[f; rho](s a, s b)
///   derivative_rho R[f; rho'](a,b)         vs -d/db R[f; rho](a,b)
///   convolution    R[f*g; rho*sigma](a,b)  vs \int_T R[f;rho](a,b') R[g;sigma](a,b-b') db'
IdentitySides calculus_check(CalculusIdentity identity, const Dataset& f, const PeriodicActivation& rho,
                             const CalculusParams& params);

// Circular convolution (rho*sigma)(t) = \int_T rho(s) sigma(t-s) ds, tabulated on `nodes` points.
PeriodicActivation circular_convolution(const PeriodicActivation& rho, const PeriodicActivation& sigma,
                                        int nodes = 1024);

}  // namespace ridgelet
