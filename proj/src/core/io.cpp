#include "core/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace ridgelet::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw IoError("cannot format number");
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw IoError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

namespace {

std::string a_header(int dim) {
  if (dim == 1) return "a";
  std::string h;
  for (int k = 1; k <= dim; ++k) h += (k > 1 ? ",a" : "a") + std::to_string(k);
  return h;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Numeric rows of a CSV with a header line; blank lines are skipped.
std::vector<std::vector<double>> csv_rows(std::string_view text, std::vector<std::string_view>& header) {
  std::vector<std::vector<double>> rows;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (first) {
      header = fields;
      first = false;
      continue;
    }
    if (fields.size() != header.size()) throw IoError("CSV row has " + std::to_string(fields.size()) + " fields, expected " + std::to_string(header.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_double(f));
    rows.push_back(std::move(row));
  }
  if (first) throw IoError("CSV has no header");
  return rows;
}

}  // namespace

std::string spectrum_csv(const SpectrumGrid& grid) {
  const auto& ax = grid.axes;
  std::string out = a_header(ax.dim) + ",b,value\n";
  std::vector<double> a(static_cast<std::size_t>(ax.dim));
  for (std::size_t ia = 0; ia < ax.a_count(); ++ia) {
    ax.a_vector(ia, a);
    std::string prefix;
    for (double v : a) prefix += format_double(v) + ",";
    for (int j = 0; j < ax.nb; ++j) {
      out += prefix;
      out += format_double(ax.b_node(j));
      out += ',';
      out += format_double(grid.at(ia, j));
      out += '\n';
    }
  }
  return out;
}

SpectrumGrid parse_spectrum_csv(std::string_view text, const GridAxes& axes) {
  std::vector<std::string_view> header;
  const auto rows = csv_rows(text, header);
  if (header.size() != static_cast<std::size_t>(axes.dim) + 2 || header.back() != "value") {
    throw IoError("spectrum CSV header does not match the grid dimension");
  }
  if (rows.size() != axes.cell_count()) throw IoError("spectrum CSV row count does not match the grid");
  std::vector<double> values(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) values[k] = rows[k].back();
  return {axes, std::move(values)};
}

std::string coefficients_csv(const FourierCoefficients& coeffs) {
  std::string out = "n,re,im\n";
  for (int n = -coeffs.n_max; n <= coeffs.n_max; ++n) {
    const auto c = coeffs[n];
    out += std::to_string(n) + "," + format_double(c.real()) + "," + format_double(c.imag()) + "\n";
  }
  return out;
}

std::string cloud_csv(const ParameterCloud& cloud) {
  std::string out = a_header(cloud.dim) + ",b,c\n";
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    for (double v : cloud.a_of(j)) out += format_double(v) + ",";
    out += format_double(cloud.b[j]) + "," + format_double(cloud.c[j]) + "\n";
  }
  return out;
}

ParameterCloud parse_cloud_csv(std::string_view text, double period) {
  std::vector<std::string_view> header;
  const auto rows = csv_rows(text, header);
  if (header.size() < 3 || header.back() != "c") throw IoError("cloud CSV needs columns a..., b, c");
  ParameterCloud cloud;
  cloud.dim = static_cast<int>(header.size()) - 2;
  cloud.T = period;
  for (const auto& r : rows) {
    cloud.a.insert(cloud.a.end(), r.begin(), r.end() - 2);
    cloud.b.push_back(r[r.size() - 2]);
    cloud.c.push_back(r.back());
  }
  return cloud;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "d,h,trial,error\n";
  for (const auto& e : report.entries) {
    out += std::to_string(e.d) + "," + report.h_names[e.h] + "," + std::to_string(e.trial) + "," +
           format_double(e.error) + "\n";
  }
  return out;
}

std::string xy_csv(std::span<const double> x, std::span<const double> y, int dim) {
  std::string out = (dim == 1 ? std::string("x") : [&] {
    std::string h;
    for (int k = 1; k <= dim; ++k) h += (k > 1 ? ",x" : "x") + std::to_string(k);
    return h;
  }()) + ",y\n";
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int k = 0; k < dim; ++k) out += format_double(x[i * dim + k]) + ",";
    out += format_double(y[i]) + "\n";
  }
  return out;
}

XYTable parse_xy_csv(std::string_view text) {
  std::vector<std::string_view> header;
  const auto rows = csv_rows(text, header);
  if (header.size() < 2) throw IoError("dataset CSV needs input columns and a target column");
  XYTable t;
  t.dim = static_cast<int>(header.size()) - 1;
  for (const auto& r : rows) {
    t.x.insert(t.x.end(), r.begin(), r.end() - 1);
    t.y.push_back(r.back());
  }
  return t;
}

std::string spectrum_ppm(const SpectrumGrid& grid) {
  const auto& ax = grid.axes;
  const std::size_t width = static_cast<std::size_t>(ax.nb);
  const std::size_t height = ax.a_count();
  double vmax = 0.0;
  for (double v : grid.values) vmax = std::max(vmax, std::abs(v));
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + width * height * 3);
  constexpr double gray = 128.0;
  constexpr double pos[3] = {178.0, 24.0, 43.0};
  constexpr double neg[3] = {33.0, 102.0, 172.0};
  for (std::size_t row = 0; row < height; ++row) {
    const std::size_t ia = height - 1 - row;
    for (std::size_t j = 0; j < width; ++j) {
      const double t = vmax > 0.0 ? std::clamp(grid.at(ia, static_cast<int>(j)) / vmax, -1.0, 1.0) : 0.0;
      const double* end = t >= 0.0 ? pos : neg;
      const double s = std::abs(t);
      for (int ch = 0; ch < 3; ++ch) {
        out += static_cast<char>(static_cast<unsigned char>(std::lround(gray + s * (end[ch] - gray))));
      }
    }
  }
  return out;
}

json axes_to_json(const GridAxes& axes) {
  return {{"A", axes.A}, {"T", axes.T}, {"m", axes.dim}, {"na", axes.na}, {"nb", axes.nb}};
}

GridAxes axes_from_json(const json& j) {
  GridAxes ax;
  try {
    ax.A = j.at("A").get<double>();
    ax.T = j.at("T").get<double>();
    ax.dim = j.value("m", 1);
    ax.na = j.at("na").get<int>();
    ax.nb = j.at("nb").get<int>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("grid metadata: ") + e.what());
  }
  ax.validate();
  return ax;
}

json activation_to_json(const PeriodicActivation& act) {
  json j = {{"kind", std::string(to_string(act.kind()))},
            {"T", act.period()},
            {"k", act.scale()},
            {"offset", act.offset()},
            {"amplitude", act.amplitude()}};
  if (act.kind() == ActivationKind::Tabulated) j["values"] = act.table();
  return j;
}

PeriodicActivation activation_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("activation must be a JSON object");
  if (!j.contains("kind")) throw InvalidArgument("activation is missing field \"kind\"");
  if (!j.contains("T")) throw InvalidArgument("activation is missing field \"T\"");
  try {
    const auto kind = activation_kind_from_string(j.at("kind").get<std::string>());
    const double T = j.at("T").get<double>();
    const bool steep = kind == ActivationKind::PeriodicTanh || kind == ActivationKind::PeriodicGaussian;
    const double k = j.value("k", steep ? 6.0 : 1.0);
    const double offset = j.value("offset", kind == ActivationKind::PeriodicRelu ? -T / 8.0 : 0.0);
    const double amplitude = j.value("amplitude", 1.0);
    std::vector<double> table;
    if (kind == ActivationKind::Tabulated) {
      if (!j.contains("values")) throw InvalidArgument("tabulated activation is missing field \"values\"");
      table = j.at("values").get<std::vector<double>>();
    }
    return {kind, T, k, offset, amplitude, std::move(table)};
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("activation: ") + e.what());
  }
}

json solve_report_json(const SolveReport& report) {
  return {{"J", report.objective.J},
          {"fit", report.objective.fit},
          {"penalty", report.objective.penalty},
          {"delta_A_norm", report.delta_A_norm},
          {"beta", report.beta},
          {"A", report.A},
          {"condition", report.condition},
          {"normal_residual", report.normal_residual},
          {"route", report.route},
          {"jittered", report.jittered}};
}

json comparison_json(const ComparisonReport& report) {
  return {{"similarity", report.cosine},
          {"sign_agreement", report.sign_agreement},
          {"compared_cells", report.compared_cells},
          {"out_of_bounds", report.out_of_bounds},
          {"pairing_errors", report.pairing_errors}};
}

json sweep_json(const SweepReport& report) {
  json medians = json::array();
  for (std::size_t di = 0; di < report.ds.size(); ++di) {
    json row = {{"d", report.ds[di]}};
    for (std::size_t hi = 0; hi < report.h_names.size(); ++hi) row[report.h_names[hi]] = report.median[di][hi];
    medians.push_back(row);
  }
  json ref = json::object();
  for (std::size_t hi = 0; hi < report.h_names.size(); ++hi) ref[report.h_names[hi]] = report.reference[hi];
  return {{"reference", ref}, {"median_error", medians}};
}

}  // namespace ridgelet::io
