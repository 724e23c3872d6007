#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "core/activation.hpp"
#include "core/convergence.hpp"
#include "core/ridge_solver.hpp"
#include "core/spectrum.hpp"
#include "core/training.hpp"

namespace ridgelet::io {

using json = nlohmann::json;

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// "a,b,value" (a1..am for m > 1), one row per cell in grid order.
std::string spectrum_csv(const SpectrumGrid& grid);
SpectrumGrid parse_spectrum_csv(std::string_view text, const GridAxes& axes);

// "n,re,im"
std::string coefficients_csv(const FourierCoefficients& coeffs);

// "a,b,c" (a1..am for m > 1)
std::string cloud_csv(const ParameterCloud& cloud);
ParameterCloud parse_cloud_csv(std::string_view text, double period);

// "d,h,trial,error"
std::string sweep_csv(const SweepReport& report);

// "x,y" with inputs in the first m columns.
struct XYTable {
  int dim = 1;
  std::vector<double> x;
  std::vector<double> y;
};
std::string xy_csv(std::span<const double> x, std::span<const double> y, int dim = 1);
XYTable parse_xy_csv(std::string_view text);

// Binary P6 heatmap: b runs left to right, a bottom to top; 0 is mid-gray and
// the colour limits are +-max|value|.
std::string spectrum_ppm(const SpectrumGrid& grid);

json axes_to_json(const GridAxes& axes);  // {A, T, m, na, nb}
GridAxes axes_from_json(const json& j);

json activation_to_json(const PeriodicActivation& act);
// Requires "kind" and "T"; "k", "offset", "amplitude" default to the kind's
// defaults, "values" holds a tabulated period.
PeriodicActivation activation_from_json(const json& j);

json solve_report_json(const SolveReport& report);  // {J, fit, penalty, delta_A_norm, beta, A, ...}
json comparison_json(const ComparisonReport& report);
json sweep_json(const SweepReport& report);

}  // namespace ridgelet::io
