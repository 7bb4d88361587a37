#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "driftls/types.hpp"

namespace driftls {

struct Series {
  std::string name;
  std::vector<double> values;
  std::vector<std::string> timestamps;  // optional row labels, may be empty
};

/// Selects the value column of a CSV: by header name when `name` is
/// nonempty, by 0-based index otherwise.
struct ColumnSpec {
  int index = 0;
  std::string name;
};

/// Loads one numeric column. A header row is auto-detected (first row whose
/// value cell does not parse as a number). Throws FileNotFound, ParseError
/// (with 1-based row), EmptyColumn.
Series load_series_csv(const std::filesystem::path& path, const ColumnSpec& column = {});

/// Writes `label,value` rows with 17 significant digits, so
/// load(write(s)) == s on values.
void write_series_csv(const std::filesystem::path& path, const Series& series);

struct SyntheticLinearConfig {
  Eigen::Index num_samples = 0;
  double noise_std = 0.0;
  Vector true_weights;     // length = feature dimension
  std::uint64_t seed = 0;
  bool intercept_column = false;  // x[0] = 1 instead of N(0,1)
};

/// y = true_weights . x + eps with x ~ N(0, I) (all coordinates, unless
/// intercept_column) and eps ~ N(0, noise_std^2). Deterministic under seed.
std::vector<Observation> gen_linear_gaussian(const SyntheticLinearConfig& config);

struct ArSegment {
  std::size_t length = 0;
  Vector coefficients;  // s_t = sum_j coeff[j] * s_{t-1-j} + eps
};

struct BreakConfig {
  std::vector<ArSegment> segments;
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  // Seed values emitted verbatim at the start of the series (count toward
  // the first segment's length). Missing history reads as zero.
  std::vector<double> initial;
  std::string name = "synthetic-break";
};

/// Concatenated AR segments; coefficients switch instantly at segment
/// boundaries. Each segment must be stable (companion spectral radius < 1);
/// throws UnstableSegment naming the offender. Deterministic under seed.
Series gen_break_series(const BreakConfig& config);

}  // namespace driftls
