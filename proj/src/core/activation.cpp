#include "core/activation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace ridgelet {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// \int_{-L}^{L} exp(i beta u) du
double symmetric_exp_integral(double beta, double half_width) {
  if (beta == 0.0) return 2.0 * half_width;
  return 2.0 * std::sin(beta * half_width) / beta;
}

void check_band(int n_max, int q) {
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  if (q < 8 * std::max(n_max, 1)) {
    throw AliasingError("quadrature points Q=" + std::to_string(q) + " below 8*N_max=" +
                        std::to_string(8 * n_max));
  }
}

double midpoint_mean_square(const std::function<double(double)>& fn, double period, int q) {
  const double h = period / q;
  double acc = 0.0;
  for (int j = 0; j < q; ++j) {
    const double v = fn(-0.5 * period + (j + 0.5) * h);
    acc += v * v;
  }
  return acc / q;
}

}  // namespace

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::PeriodicRelu: return "periodic-relu";
    case ActivationKind::PeriodicTanh: return "periodic-tanh";
    case ActivationKind::PeriodicGaussian: return "periodic-gaussian";
    case ActivationKind::Sine: return "sine";
    case ActivationKind::Cosine: return "cosine";
    case ActivationKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

ActivationKind activation_kind_from_string(std::string_view name) {
  for (auto k : {ActivationKind::PeriodicRelu, ActivationKind::PeriodicTanh, ActivationKind::PeriodicGaussian,
                 ActivationKind::Sine, ActivationKind::Cosine, ActivationKind::Tabulated}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown activation kind '" + std::string(name) + "'");
}

double wrap_to_torus(double t, double period) {
  double r = t - period * std::floor(t / period + 0.5);
  if (r >= 0.5 * period) r -= period;
  return r;
}

PeriodicActivation::PeriodicActivation(ActivationKind kind, double period, double scale, double offset,
                                       double amplitude, std::vector<double> table)
    : kind_(kind), period_(period), scale_(scale), offset_(offset), amplitude_(amplitude), table_(std::move(table)) {
  if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("period T must be positive");
  if (amplitude == 0.0 || !std::isfinite(amplitude)) throw InvalidArgument("amplitude must be finite and non-zero");
  if (!std::isfinite(scale) || !std::isfinite(offset)) throw InvalidArgument("scale and offset must be finite");
  if (kind == ActivationKind::Tabulated && table_.size() < 2) {
    throw InvalidArgument("tabulated activation needs at least two samples");
  }
  if (kind != ActivationKind::Tabulated && !table_.empty()) {
    throw InvalidArgument("samples are only accepted for tabulated activations");
  }
}

PeriodicActivation PeriodicActivation::relu(double period) {
  return {ActivationKind::PeriodicRelu, period, 1.0, -period / 8.0, 1.0};
}
PeriodicActivation PeriodicActivation::tanh(double period, double scale) {
  return {ActivationKind::PeriodicTanh, period, scale, 0.0, 1.0};
}
PeriodicActivation PeriodicActivation::gaussian(double period, double scale) {
  return {ActivationKind::PeriodicGaussian, period, scale, 0.0, 1.0};
}
PeriodicActivation PeriodicActivation::sine(double period, double scale) {
  return {ActivationKind::Sine, period, scale, 0.0, 1.0};
}
PeriodicActivation PeriodicActivation::cosine(double period, double scale) {
  return {ActivationKind::Cosine, period, scale, 0.0, 1.0};
}
PeriodicActivation PeriodicActivation::tabulated(double period, std::vector<double> samples) {
  return {ActivationKind::Tabulated, period, 1.0, 0.0, 1.0, std::move(samples)};
}

double PeriodicActivation::interpolate(double u) const {
  const double w = wrap_to_torus(u, period_);
  const auto n = table_.size();
  const double pos = (w + 0.5 * period_) / period_ * static_cast<double>(n);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i >= n) i = n - 1;
  const double frac = pos - static_cast<double>(i);
  return table_[i] + frac * (table_[(i + 1) % n] - table_[i]);
}

double PeriodicActivation::interpolate_slope(double u) const {
  const double w = wrap_to_torus(u, period_);
  const auto n = table_.size();
  const double pos = (w + 0.5 * period_) / period_ * static_cast<double>(n);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i >= n) i = n - 1;
  return (table_[(i + 1) % n] - table_[i]) * static_cast<double>(n) / period_;
}

double PeriodicActivation::base(double u) const {
  switch (kind_) {
    case ActivationKind::PeriodicRelu: return u > 0.0 ? u : 0.0;
    case ActivationKind::PeriodicTanh: return std::tanh(u);
    case ActivationKind::PeriodicGaussian: return std::exp(-u * u);
    case ActivationKind::Sine: return std::sin(2.0 * kPi * u / period_);
    case ActivationKind::Cosine: return std::cos(2.0 * kPi * u / period_);
    case ActivationKind::Tabulated: return interpolate(u);
  }
  return 0.0;
}

// Subgradient 0 at the ReLU kink; the jump at the period boundary is ignored
// (derivative of the branch the point belongs to).
double PeriodicActivation::base_derivative(double u) const {
  switch (kind_) {
    case ActivationKind::PeriodicRelu: return u > 0.0 ? 1.0 : 0.0;
    case ActivationKind::PeriodicTanh: {
      const double th = std::tanh(u);
      return 1.0 - th * th;
    }
    case ActivationKind::PeriodicGaussian: return -2.0 * u * std::exp(-u * u);
    case ActivationKind::Sine: return 2.0 * kPi / period_ * std::cos(2.0 * kPi * u / period_);
    case ActivationKind::Cosine: return -2.0 * kPi / period_ * std::sin(2.0 * kPi * u / period_);
    case ActivationKind::Tabulated: return interpolate_slope(u);
  }
  return 0.0;
}

double PeriodicActivation::derivative(double t) const {
  return amplitude_ * scale_ * base_derivative(scale_ * wrap_to_torus(t, period_));
}

double PeriodicActivation::value_and_derivative(double t, double& slope) const {
  const double u = scale_ * wrap_to_torus(t, period_);
  double v = 0.0;
  double dv = 0.0;
  switch (kind_) {
    case ActivationKind::PeriodicTanh: {
      v = std::tanh(u);
      dv = 1.0 - v * v;
      break;
    }
    case ActivationKind::PeriodicGaussian: {
      v = std::exp(-u * u);
      dv = -2.0 * u * v;
      break;
    }
    default:
      v = base(u);
      dv = base_derivative(u);
  }
  slope = amplitude_ * scale_ * dv;
  return amplitude_ * v + offset_;
}

PeriodicActivation PeriodicActivation::with_offset(double offset) const {
  PeriodicActivation out = *this;
  if (!std::isfinite(offset)) throw InvalidArgument("offset must be finite");
  out.offset_ = offset;
  return out;
}

PeriodicActivation PeriodicActivation::with_amplitude(double amplitude) const {
  return {kind_, period_, scale_, offset_, amplitude, table_};
}

double PeriodicActivation::max_abs(int samples) const {
  double m = 0.0;
  for (int j = 0; j < samples; ++j) {
    m = std::max(m, std::abs((*this)(-0.5 * period_ + (j + 0.5) * period_ / samples)));
  }
  // ReLU attains its supremum at the right end of the period.
  if (kind_ == ActivationKind::PeriodicRelu) {
    m = std::max(m, std::abs(amplitude_ * std::max(0.0, scale_ * 0.5 * period_) + offset_));
    m = std::max(m, std::abs(amplitude_ * std::max(0.0, -scale_ * 0.5 * period_) + offset_));
  }
  return m;
}

bool PeriodicActivation::has_closed_form() const {
  switch (kind_) {
    case ActivationKind::PeriodicRelu: return scale_ > 0.0;
    case ActivationKind::Sine:
    case ActivationKind::Cosine: return true;
    default: return false;
  }
}

FourierCoefficients fourier_coefficients(const std::function<double(double)>& fn, double period, int n_max,
                                         int q) {
  check_band(n_max, q);
  FourierCoefficients out;
  out.period = period;
  out.n_max = n_max;
  out.quadrature_points = q;
  out.values.assign(static_cast<std::size_t>(2 * n_max + 1), cplx{});

  const double h = period / q;
  std::vector<double> samples(static_cast<std::size_t>(q));
  std::vector<double> nodes(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    nodes[j] = -0.5 * period + (j + 0.5) * h;
    samples[j] = fn(nodes[j]);
  }
  for (int n = 0; n <= n_max; ++n) {
    const double omega = 2.0 * kPi * n / period;
    double re = 0.0, im = 0.0;
    for (int j = 0; j < q; ++j) {
      re += samples[j] * std::cos(omega * nodes[j]);
      im += samples[j] * std::sin(omega * nodes[j]);
    }
    const cplx c{re / q, im / q};
    out.values[static_cast<std::size_t>(n_max + n)] = c;
    out.values[static_cast<std::size_t>(n_max - n)] = std::conj(c);
  }
  double ms = 0.0;
  for (double v : samples) ms += v * v;
  out.mean_square = ms / q;
  return out;
}

FourierCoefficients fourier_coefficients(const PeriodicActivation& act, int n_max, int q) {
  if (!act.has_closed_form()) {
    return fourier_coefficients([&act](double t) { return act(t); }, act.period(), n_max, q);
  }
  check_band(n_max, q);
  const double T = act.period();
  const double s = act.amplitude();
  const double k = act.scale();
  const double c0 = act.offset();

  FourierCoefficients out;
  out.period = T;
  out.n_max = n_max;
  out.quadrature_points = q;
  out.values.assign(static_cast<std::size_t>(2 * n_max + 1), cplx{});

  for (int n = -n_max; n <= n_max; ++n) {
    const double omega = 2.0 * kPi * n / T;
    cplx c;
    switch (act.kind()) {
      case ActivationKind::PeriodicRelu: {
        if (n == 0) {
          c = s * k * T / 8.0 + c0;
        } else {
          const double sign = (n % 2 == 0) ? 1.0 : -1.0;
          // \int_0^{T/2} t e^{i omega t} dt
          const cplx integral = cplx{0.0, -sign * T / (2.0 * omega)} + (sign - 1.0) / (omega * omega);
          c = s * k / T * integral;
        }
        break;
      }
      case ActivationKind::Sine: {
        const double alpha = 2.0 * kPi * k / T;
        const double diff = symmetric_exp_integral(omega + alpha, 0.5 * T) -
                            symmetric_exp_integral(omega - alpha, 0.5 * T);
        c = s / T * cplx{0.0, -0.5 * diff};
        if (n == 0) c += c0;
        break;
      }
      case ActivationKind::Cosine: {
        const double alpha = 2.0 * kPi * k / T;
        const double sum = symmetric_exp_integral(omega + alpha, 0.5 * T) +
                           symmetric_exp_integral(omega - alpha, 0.5 * T);
        c = s / T * 0.5 * sum;
        if (n == 0) c += c0;
        break;
      }
      default: break;
    }
    out.values[static_cast<std::size_t>(n + n_max)] = c;
  }
  out.mean_square = midpoint_mean_square([&act](double t) { return act(t); }, T, q);
  return out;
}

double admissibility_sum(const FourierCoefficients& coeffs, int m) {
  if (m < 1) throw InvalidArgument("input dimension m must be >= 1");
  double acc = 0.0;
  for (int n = 1; n <= coeffs.n_max; ++n) {
    const double w = std::pow(static_cast<double>(n), -m);
    acc += (std::norm(coeffs[n]) + std::norm(coeffs[-n])) * w;
  }
  return std::pow(coeffs.period, m + 1) * acc;
}

double admissibility_tail_bound(const FourierCoefficients& coeffs, int m) {
  if (m < 1) throw InvalidArgument("input dimension m must be >= 1");
  double captured = 0.0;
  for (const auto& c : coeffs.values) captured += std::norm(c);
  const double remainder = std::max(0.0, coeffs.mean_square - captured);
  return std::pow(coeffs.period, m + 1) * remainder / std::pow(coeffs.n_max + 1.0, m);
}

AdmissibilityReport check_admissibility(const PeriodicActivation& act, int m, int n_max, int q) {
  const auto coeffs = fourier_coefficients(act, n_max, q);
  AdmissibilityReport r;
  r.dc = coeffs.dc();
  r.sum = admissibility_sum(coeffs, m);
  r.tail_bound = admissibility_tail_bound(coeffs, m);
  r.admissible = std::abs(r.dc) < kDcTolerance && std::abs(r.sum - 1.0) < kAdmissibilityTolerance;
  return r;
}

PeriodicActivation normalize_to_admissible(const PeriodicActivation& act, int m, int n_max, int q) {
  const auto coeffs = fourier_coefficients(act, n_max, q);
  const double sum = admissibility_sum(coeffs, m);
  // Round-off leaves a constant function with a sum of order 1e-30.
  const double scale = std::pow(coeffs.period, m + 1) * coeffs.mean_square;
  if (!(sum > 1e-20 * std::max(1.0, scale))) {
    throw NotAdmissibleError("activation has no non-constant Fourier content within |n| <= " +
                             std::to_string(n_max));
  }
  // c(0) = s * mean(base) + c0; keep mean(base) and solve for the new offset.
  const double base_mean = (coeffs.dc().real() - act.offset()) / act.amplitude();
  const double amplitude = act.amplitude() / std::sqrt(sum);
  return act.with_amplitude(amplitude).with_offset(-amplitude * base_mean);
}

std::complex<double> pair_admissibility(const FourierCoefficients& rho, const FourierCoefficients& sigma, int m) {
  if (m < 1) throw InvalidArgument("input dimension m must be >= 1");
  if (rho.period != sigma.period) throw InvalidArgument("rho and sigma have different periods");
  if (rho.n_max != sigma.n_max) throw InvalidArgument("rho and sigma have different N_max");
  cplx acc{};
  for (int n = 1; n <= rho.n_max; ++n) {
    const double w = std::pow(static_cast<double>(n), -m);
    acc += (std::conj(rho[n]) * sigma[n] + std::conj(rho[-n]) * sigma[-n]) * w;
  }
  return std::pow(rho.period, m + 1) * acc;
}

std::string_view to_string(PairVerdict verdict) {
  switch (verdict) {
    case PairVerdict::Admissible: return "admissible pair";
    case PairVerdict::Degenerate: return "degenerate pair";
    case PairVerdict::NotNormalized: return "not admissible pair";
  }
  return "unknown";
}

PairReport check_pair(const PeriodicActivation& rho, const PeriodicActivation& sigma, int m, int n_max, int q) {
  const auto cr = fourier_coefficients(rho, n_max, q);
  const auto cs = fourier_coefficients(sigma, n_max, q);
  PairReport r;
  r.value = pair_admissibility(cr, cs, m);
  r.dc_product = std::conj(cr.dc()) * cs.dc();
  if (std::abs(r.value) < kAdmissibilityTolerance) {
    r.verdict = PairVerdict::Degenerate;
  } else if (std::abs(r.value - 1.0) < kAdmissibilityTolerance && std::abs(r.dc_product) < kDcTolerance) {
    r.verdict = PairVerdict::Admissible;
  } else {
    r.verdict = PairVerdict::NotNormalized;
  }
  return r;
}

PeriodicActivation normalize_against(const PeriodicActivation& rho, const PeriodicActivation& sigma, int m, int n_max,
                                     int q) {
  const auto cr = fourier_coefficients(rho, n_max, q);
  const auto cs = fourier_coefficients(sigma, n_max, q);
  const double value = pair_admissibility(cr, cs, m).real();
  if (std::abs(value) < kAdmissibilityTolerance) {
    throw NotAdmissibleError("rho is orthogonal to sigma in the admissibility pairing");
  }
  const double base_mean = (cr.dc().real() - rho.offset()) / rho.amplitude();
  const double amplitude = rho.amplitude() / value;
  return rho.with_amplitude(amplitude).with_offset(-amplitude * base_mean);
}

}  // namespace ridgelet
