#include "driftls/data.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "driftls/errors.hpp"
#include "driftls/rng.hpp"

namespace driftls {

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

double companion_spectral_radius(const Vector& coefficients) {
  const Eigen::Index p = coefficients.size();
  Matrix companion = Matrix::Zero(p, p);
  companion.row(0) = coefficients.transpose();
  if (p > 1) companion.block(1, 0, p - 1, p - 1).setIdentity();
  return Eigen::EigenSolver<Matrix>(companion, /*computeEigenvectors=*/false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

Series load_series_csv(const std::filesystem::path& path, const ColumnSpec& column) {
  std::ifstream file(path);
  if (!file) throw FileNotFound("cannot open " + path.string());

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw EmptyColumn("no rows in " + path.string());

  int col = column.index;
  std::size_t first_data_row = 0;  // 0-based
  std::string name = path.stem().string();

  if (!column.name.empty()) {
    const auto& header = rows[0];
    const auto it = std::find(header.begin(), header.end(), column.name);
    if (it == header.end())
      throw ParseError(1, "column '" + column.name + "' not found in header");
    col = static_cast<int>(it - header.begin());
    first_data_row = 1;
    name = column.name;
  } else {
    if (col < 0) throw BadHyperparameter("load_series_csv: negative column index");
    double probe;
    const bool row0_numeric = static_cast<std::size_t>(col) < rows[0].size() &&
                              parse_double(rows[0][static_cast<std::size_t>(col)], probe);
    if (!row0_numeric) {
      first_data_row = 1;  // header auto-detected
      if (static_cast<std::size_t>(col) < rows[0].size() && !rows[0][static_cast<std::size_t>(col)].empty())
        name = rows[0][static_cast<std::size_t>(col)];
    }
  }

  Series series;
  series.name = name;
  const bool capture_labels = first_data_row == 1 && col != 0;
  for (std::size_t r = first_data_row; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (static_cast<std::size_t>(col) >= cells.size())
      throw ParseError(r + 1, "missing column " + std::to_string(col));
    double value;
    if (!parse_double(cells[static_cast<std::size_t>(col)], value))
      throw ParseError(r + 1, "cannot parse '" + cells[static_cast<std::size_t>(col)] + "'");
    series.values.push_back(value);
    if (capture_labels) series.timestamps.push_back(cells[0]);
  }
  if (series.values.empty()) throw EmptyColumn("no data rows in " + path.string());
  return series;
}

void write_series_csv(const std::filesystem::path& path, const Series& series) {
  std::ofstream file(path);
  if (!file) throw FileNotFound("cannot write " + path.string());
  const std::string value_header = series.name.empty() ? "value" : series.name;
  file << "timestamp," << value_header << "\n";
  char buf[64];
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", series.values[i]);
    if (i < series.timestamps.size())
      file << series.timestamps[i];
    else
      file << i;
    file << ',' << buf << "\n";
  }
}

std::vector<Observation> gen_linear_gaussian(const SyntheticLinearConfig& config) {
  if (config.num_samples < 1) throw BadHyperparameter("gen_linear_gaussian: num_samples must be >= 1");
  if (config.noise_std < 0.0) throw BadHyperparameter("gen_linear_gaussian: noise_std must be >= 0");
  const Eigen::Index n = config.true_weights.size();
  if (n < 1) throw BadHyperparameter("gen_linear_gaussian: true_weights must be nonempty");

  Rng rng(config.seed);
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(config.num_samples));
  for (Eigen::Index i = 0; i < config.num_samples; ++i) {
    Vector x = rng.normal_vector(n);
    if (config.intercept_column) x[0] = 1.0;
    const double y = config.true_weights.dot(x) + config.noise_std * rng.normal();
    out.push_back({FeatureVector(std::move(x)), y});
  }
  return out;
}

Series gen_break_series(const BreakConfig& config) {
  if (config.segments.empty()) throw BadHyperparameter("gen_break_series: no segments");
  if (config.noise_std < 0.0) throw BadHyperparameter("gen_break_series: noise_std must be >= 0");

  std::size_t total = 0;
  for (std::size_t i = 0; i < config.segments.size(); ++i) {
    const ArSegment& seg = config.segments[i];
    if (seg.length == 0) throw BadHyperparameter("gen_break_series: segment length must be > 0");
    if (seg.coefficients.size() < 1)
      throw BadHyperparameter("gen_break_series: segment needs at least one coefficient");
    const double radius = companion_spectral_radius(seg.coefficients);
    if (radius >= 1.0)
      throw UnstableSegment(i, "companion spectral radius " + std::to_string(radius) + " >= 1");
    total += seg.length;
  }
  if (config.initial.size() > config.segments.front().length)
    throw BadHyperparameter("gen_break_series: initial values exceed the first segment");

  Rng rng(config.seed);
  Series series;
  series.name = config.name;
  series.values.reserve(total);

  std::size_t segment_index = 0;
  std::size_t segment_end = config.segments[0].length;
  for (std::size_t t = 0; t < total; ++t) {
    if (t >= segment_end) {
      ++segment_index;
      segment_end += config.segments[segment_index].length;
    }
    if (t < config.initial.size()) {
      series.values.push_back(config.initial[t]);
      continue;
    }
    const Vector& coeffs = config.segments[segment_index].coefficients;
    double value = config.noise_std * rng.normal();
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
      const std::size_t lag = static_cast<std::size_t>(j) + 1;
      if (t >= lag) value += coeffs[j] * series.values[t - lag];
    }
    series.values.push_back(value);
  }
  return series;
}

}  // namespace driftls
