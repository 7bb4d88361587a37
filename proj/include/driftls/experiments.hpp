#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "driftls/data.hpp"
#include "driftls/learner.hpp"
#include "driftls/types.hpp"

namespace driftls {

enum class Regularizer { invariant, l2 };
enum class PinvMethod { proposed, baseline, both };
enum class Optimizer { second_order, adam, adagrad, rmsprop, naive };

std::string to_string(Regularizer r);
std::string to_string(PinvMethod m);
std::string to_string(Optimizer o);

/// Sidecar metadata for one experiment run. The hash covers only the
/// deterministic fields (experiment, params, version); wall clock and timing
/// are reporting-only.
struct RunManifest {
  std::string experiment;
  nlohmann::json params;
  std::string version;
  double wall_clock_seconds = 0.0;
  nlohmann::json timing;

  std::uint64_t hash() const;
  void write(const std::filesystem::path& path) const;
};

/// 17-significant-digit formatting used by every CSV writer; value-preserving
/// and byte-stable.
std::string format_double(double value);

// --- pinv-bench: error accumulation of the recursive pseudo-inverse -------

struct PinvBenchConfig {
  int n = 32;
  PinvMethod method = PinvMethod::both;
  std::uint64_t seed = 0;
};

struct PinvBenchRow {
  int t = 0;
  // NaN when the method selection excludes a column.
  double err_proposed = 0.0;
  double err_baseline = 0.0;
};

/// H_t = H_{t-1} + x_t x_t^T for t = 1..n with x_t ~ N(0, I); each row holds
/// the relative error of the recursively updated pseudo-inverse against the
/// per-step non-recursive oracle. method = both shares one x_t stream.
std::vector<PinvBenchRow> run_pinv_bench(const PinvBenchConfig& config);

RunManifest make_manifest(const PinvBenchConfig& config);
void write_pinv_bench_csv(const std::filesystem::path& path, const PinvBenchConfig& config,
                          const std::vector<PinvBenchRow>& rows, std::uint64_t manifest_hash);

// --- ridge-scaling: weight sensitivity to coordinate scaling --------------

struct RidgeScalingConfig {
  std::vector<double> kappas;
  double lambda = 1.0;
  Eigen::Index samples = 10000;
  std::uint64_t seed = 0;
  Regularizer regularizer = Regularizer::l2;
};

struct RidgeScalingRow {
  double kappa = 1.0;
  double theta0 = 0.0;
  double theta1_scaled = 0.0;    // fitted weight of the scaled coordinate
  double theta1_unscaled = 0.0;  // theta1_scaled / kappa
};

/// Two standard-normal explanatory variables, y = x0 + x1 + eps; coordinate 1
/// is observed scaled by 1/kappa. One batch fit (gamma = 1) per kappa over a
/// shared sample, reporting the unscaled weight.
std::vector<RidgeScalingRow> run_ridge_scaling(const RidgeScalingConfig& config);

RunManifest make_manifest(const RidgeScalingConfig& config);
void write_ridge_scaling_csv(const std::filesystem::path& path, const RidgeScalingConfig& config,
                             const std::vector<RidgeScalingRow>& rows,
                             std::uint64_t manifest_hash);

// --- sunspot-sweep: regularizer comparison over (order, lambda) -----------

struct SunspotSweepConfig {
  std::vector<int> orders;
  std::vector<double> lambdas;  // nominal sweep values
  double gamma = 0.99;
  Regularizer regularizer = Regularizer::invariant;
  bool both = false;  // run both regularizers
};

struct SweepRow {
  int order = 0;
  double lambda = 0.0;  // nominal
  Regularizer regularizer = Regularizer::invariant;
  double effective_lambda = 0.0;  // lambda/100 for l2 (figure axis convention)
  double rmse = 0.0;              // all predicted steps
  double rmse_excl_burnin = 0.0;  // excludes the first n = order+1 steps
  std::size_t steps = 0;
};

/// Online one-step-ahead prediction over the full series (predict before
/// update) for every (order, lambda, regularizer) grid point.
std::vector<SweepRow> run_sunspot_sweep(const SunspotSweepConfig& config, const Series& series);

RunManifest make_manifest(const SunspotSweepConfig& config, const std::string& data_name);
void write_sweep_csv(const std::filesystem::path& path, const SunspotSweepConfig& config,
                     const std::vector<SweepRow>& rows, std::uint64_t manifest_hash);

// --- run-online: generic online job with metrics --------------------------

struct OnlineRunConfig {
  int ar_order = 1;
  Regularizer regularizer = Regularizer::invariant;
  double gamma = 0.99;
  double lambda = 0.0;
  Optimizer optimizer = Optimizer::second_order;
  int skip_burnin = 0;  // rows dropped from the metrics (not from the CSV)
  FirstOrderConfig first_order;
};

struct OnlineStepRow {
  long step = 0;
  double target = 0.0;
  double prediction = 0.0;
  double error = 0.0;
};

struct OnlineMetrics {
  std::size_t steps = 0;  // rows entering the metrics after skip_burnin
  double mse = 0.0;
  double rmse = 0.0;
  // Additionally excluding the rank burn-in of n = order+1 steps.
  double mse_excl_burnin = 0.0;
  double rmse_excl_burnin = 0.0;
  // Sample standard deviation of the MSE over 10 equal intervals (error-bar
  // convention); NaN when fewer than 10 steps.
  double interval_mse_stddev = 0.0;
  std::optional<double> relative_mse;  // this run's MSE / reference MSE
};

struct OnlineRunResult {
  std::vector<OnlineStepRow> rows;
  OnlineMetrics metrics;
};

OnlineRunResult run_online(const OnlineRunConfig& config, const Series& series);

/// MSE of the reference run's error column; pairs with metrics.relative_mse.
double mse_of_rows(const std::vector<OnlineStepRow>& rows, std::size_t skip);

RunManifest make_manifest(const OnlineRunConfig& config, const std::string& data_name);
void write_online_csv(const std::filesystem::path& path, const std::vector<OnlineStepRow>& rows,
                      std::uint64_t manifest_hash);
/// Reads the error column back from a run-online CSV (for --reference).
std::vector<OnlineStepRow> read_online_csv(const std::filesystem::path& path);

}  // namespace driftls
