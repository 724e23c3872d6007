#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ridgelet {

enum class ActivationKind {
  PeriodicRelu,
  PeriodicTanh,
  PeriodicGaussian,
  Sine,
  Cosine,
  Tabulated,
};

std::string_view to_string(ActivationKind kind);
ActivationKind activation_kind_from_string(std::string_view name);

// Maps t into the half-open period [-T/2, T/2).
double wrap_to_torus(double t, double period);

/// A period-T activation function, evaluated as
///
///     sigma(t) = amplitude * base(scale * wrap(t)) + offset
///
/// where base is max(0,u), tanh(u), exp(-u^2), sin(2 pi u / T), cos(2 pi u / T)
/// or a linear interpolation of one tabulated period. The function is the
/// restriction of base to one period, repeated; it is generally discontinuous
/// at t = +-T/2.
class PeriodicActivation {
 public:
  PeriodicActivation(ActivationKind kind, double period, double scale = 1.0,
                     double offset = 0.0, double amplitude = 1.0,
                     std::vector<double> table = {});

  // ReLU restricted to one period with the offset -T/8 that zeroes its mean.
  static PeriodicActivation relu(double period = 1.0);
  static PeriodicActivation tanh(double period = 1.0, double scale = 6.0);
  static PeriodicActivation gaussian(double period = 1.0, double scale = 6.0);
  static PeriodicActivation sine(double period = 1.0, double scale = 1.0);
  static PeriodicActivation cosine(double period = 1.0, double scale = 1.0);
  // One period sampled at -T/2 + j T/L, j = 0..L-1.
  static PeriodicActivation tabulated(double period, std::vector<double> samples);

  double operator()(double t) const {
    return amplitude_ * base(scale_ * wrap_to_torus(t, period_)) + offset_;
  }
  double derivative(double t) const;
  // sigma(t) and sigma'(t) with a single reduction and transcendental call.
  double value_and_derivative(double t, double& slope) const;

  ActivationKind kind() const { return kind_; }
  double period() const { return period_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& table() const { return table_; }

  PeriodicActivation with_offset(double offset) const;
  PeriodicActivation with_amplitude(double amplitude) const;

  double max_abs(int samples = 4096) const;

  // Whether fourier_coefficients can use an exact closed form.
  bool has_closed_form() const;

  bool operator==(const PeriodicActivation&) const = default;

 private:
  double base(double u) const;
  double base_derivative(double u) const;
  double interpolate(double u) const;
  double interpolate_slope(double u) const;

  ActivationKind kind_;
  double period_;
  double scale_;
  double offset_;
  double amplitude_;
  std::vector<double> table_;
};

/// Fourier coefficients on the torus,
///     c(n) = (1/T) \int_{-T/2}^{T/2} sigma(t) exp(+i 2 pi n t / T) dt,
/// stored for |n| <= n_max. The mean square (1/T) \int sigma^2 is kept so the
/// truncated part of Parseval's identity can be bounded.
struct FourierCoefficients {
  double period = 1.0;
  int n_max = 0;
  int quadrature_points = 0;
  std::vector<std::complex<double>> values;  // values[n + n_max]
  double mean_square = 0.0;

  std::complex<double> operator[](int n) const { return values.at(static_cast<std::size_t>(n + n_max)); }
  std::complex<double> dc() const { return (*this)[0]; }
};

inline constexpr int kDefaultNMax = 64;
inline constexpr int kDefaultQuadrature = 4096;

// Throws AliasingError unless q >= 8 * n_max.
FourierCoefficients fourier_coefficients(const PeriodicActivation& act, int n_max = kDefaultNMax,
                                         int q = kDefaultQuadrature);

// Midpoint-rule coefficients of an arbitrary period-T function.
FourierCoefficients fourier_coefficients(const std::function<double(double)>& fn, double period,
                                         int n_max = kDefaultNMax, int q = kDefaultQuadrature);

// T^{m+1} sum_{0<|n|<=n_max} |c(n)|^2 / |n|^m.
double admissibility_sum(const FourierCoefficients& coeffs, int m);

// Upper bound on the omitted part sum_{|n|>n_max} of admissibility_sum, from
// Parseval: T^{m+1} (mean_square - sum_{|n|<=n_max} |c(n)|^2) / (n_max+1)^m.
double admissibility_tail_bound(const FourierCoefficients& coeffs, int m);

inline constexpr double kDcTolerance = 1e-8;
inline constexpr double kAdmissibilityTolerance = 1e-6;

struct AdmissibilityReport {
  std::complex<double> dc;
  double sum = 0.0;
  double tail_bound = 0.0;
  bool admissible = false;
};

AdmissibilityReport check_admissibility(const PeriodicActivation& act, int m, int n_max = kDefaultNMax,
                                        int q = kDefaultQuadrature);

// Adjusts the offset so c(0) = 0 and rescales the amplitude so that
// admissibility_sum = 1. Throws NotAdmissibleError for a constant function.
PeriodicActivation normalize_to_admissible(const PeriodicActivation& act, int m, int n_max = kDefaultNMax,
                                           int q = kDefaultQuadrature);

// T^{m+1} sum_{0<|n|<=n_max} conj(rho(n)) sigma(n) / |n|^m.
// Throws InvalidArgument when the periods or bands differ.
std::complex<double> pair_admissibility(const FourierCoefficients& rho, const FourierCoefficients& sigma, int m);

enum class PairVerdict { Admissible, Degenerate, NotNormalized };
std::string_view to_string(PairVerdict verdict);

struct PairReport {
  std::complex<double> value;
  std::complex<double> dc_product;
  PairVerdict verdict = PairVerdict::NotNormalized;
};

PairReport check_pair(const PeriodicActivation& rho, const PeriodicActivation& sigma, int m,
                      int n_max = kDefaultNMax, int q = kDefaultQuadrature);

// Rescales rho (and zeroes its mean) so that its pairing with sigma is 1.
PeriodicActivation normalize_against(const PeriodicActivation& rho, const PeriodicActivation& sigma, int m,
                                     int n_max = kDefaultNMax, int q = kDefaultQuadrature);

}  // namespace ridgelet
