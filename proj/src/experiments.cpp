#include "driftls/experiments.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "driftls/errors.hpp"
#include "driftls/loss.hpp"
#include "driftls/models.hpp"
#include "driftls/rng.hpp"
#include "driftls/version.hpp"

namespace driftls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw FileNotFound("cannot write " + path.string());
  return file;
}

void write_hash_comment(std::ofstream& file, std::uint64_t manifest_hash) {
  file << "# manifest_hash=" << hash_hex(manifest_hash) << "\n";
}

}  // namespace

std::string to_string(Regularizer r) { return r == Regularizer::invariant ? "invariant" : "l2"; }

std::string to_string(PinvMethod m) {
  switch (m) {
    case PinvMethod::proposed: return "proposed";
    case PinvMethod::baseline: return "baseline";
    case PinvMethod::both: return "both";
  }
  return "?";
}

std::string to_string(Optimizer o) {
  switch (o) {
    case Optimizer::second_order: return "second-order";
    case Optimizer::adam: return "adam";
    case Optimizer::adagrad: return "adagrad";
    case Optimizer::rmsprop: return "rmsprop";
    case Optimizer::naive: return "naive";
  }
  return "?";
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::uint64_t RunManifest::hash() const {
  const nlohmann::json deterministic{
      {"experiment", experiment}, {"params", params}, {"version", version}};
  return fnv1a64(deterministic.dump());
}

void RunManifest::write(const std::filesystem::path& path) const {
  nlohmann::json j{{"experiment", experiment},
                   {"params", params},
                   {"version", version},
                   {"manifest_hash", hash_hex(hash())},
                   {"wall_clock_seconds", wall_clock_seconds},
                   {"timing", timing}};
  auto file = open_out(path);
  file << j.dump(2) << "\n";
}

// --- pinv-bench ------------------------------------------------------------

std::vector<PinvBenchRow> run_pinv_bench(const PinvBenchConfig& config) {
  if (config.n < 1) throw BadHyperparameter("pinv-bench: n must be >= 1");
  const Eigen::Index n = config.n;
  const bool do_proposed = config.method != PinvMethod::baseline;
  const bool do_baseline = config.method != PinvMethod::proposed;

  Rng rng(config.seed);
  PinvState proposed = PinvState::zero(n);
  PinvState baseline = PinvState::zero(n);
  SymmetricMatrix h_exact = SymmetricMatrix::Zero(n, n);

  std::vector<PinvBenchRow> rows;
  rows.reserve(static_cast<std::size_t>(config.n));
  for (int t = 1; t <= config.n; ++t) {
    const Vector c = rng.normal_vector(n);
    h_exact += c * c.transpose();
    symmetrize(h_exact);
    const SymmetricMatrix truth = pinv_oracle(h_exact);

    PinvBenchRow row{t, kNaN, kNaN};
    if (do_proposed) {
      proposed = pinv_rank1_update_proposed(proposed, c);
      row.err_proposed = relative_error(proposed.h_pinv, truth);
    }
    if (do_baseline) {
      baseline = pinv_rank1_update_baseline(baseline, c);
      row.err_baseline = relative_error(baseline.h_pinv, truth);
    }
    rows.push_back(row);
  }
  return rows;
}

RunManifest make_manifest(const PinvBenchConfig& config) {
  RunManifest m;
  m.experiment = "pinv-bench";
  m.version = kVersion;
  m.params = {{"n", config.n}, {"method", to_string(config.method)}, {"seed", config.seed}};
  return m;
}

void write_pinv_bench_csv(const std::filesystem::path& path, const PinvBenchConfig& config,
                          const std::vector<PinvBenchRow>& rows, std::uint64_t manifest_hash) {
  auto file = open_out(path);
  write_hash_comment(file, manifest_hash);
  file << "n,t,seed";
  if (config.method != PinvMethod::baseline) file << ",relative_error_proposed";
  if (config.method != PinvMethod::proposed) file << ",relative_error_baseline";
  file << "\n";
  for (const PinvBenchRow& row : rows) {
    file << config.n << ',' << row.t << ',' << config.seed;
    if (config.method != PinvMethod::baseline) file << ',' << format_double(row.err_proposed);
    if (config.method != PinvMethod::proposed) file << ',' << format_double(row.err_baseline);
    file << "\n";
  }
}

// --- ridge-scaling -----------------------------------------------------------

std::vector<RidgeScalingRow> run_ridge_scaling(const RidgeScalingConfig& config) {
  if (config.kappas.empty()) throw BadHyperparameter("ridge-scaling: no kappa values");
  for (const double kappa : config.kappas)
    if (!(kappa > 0.0)) throw BadHyperparameter("ridge-scaling: kappa must be > 0");
  if (config.lambda < 0.0) throw BadHyperparameter("ridge-scaling: lambda must be >= 0");

  // One shared sample across all kappas: two standard-normal explanatory
  // variables, y = x0 + x1 + eps. Coordinate 0 plays the unpenalized slot.
  SyntheticLinearConfig base;
  base.num_samples = config.samples;
  base.noise_std = 1.0;
  base.true_weights = Vector::Constant(2, 1.0);
  base.seed = config.seed;
  base.intercept_column = false;
  const std::vector<Observation> data = gen_linear_gaussian(base);

  std::vector<RidgeScalingRow> rows;
  rows.reserve(config.kappas.size());
  for (const double kappa : config.kappas) {
    std::vector<Observation> scaled = data;
    for (Observation& obs : scaled) obs.x.full[1] /= kappa;

    // Batch fit (gamma = 1) of the chosen regularized system.
    const SymmetricMatrix h = data_hessian(scaled, 1.0);
    const Vector g = target_correlation(scaled, 1.0);
    SymmetricMatrix system;
    if (config.regularizer == Regularizer::l2) {
      system = h + config.lambda * SymmetricMatrix::Identity(2, 2);
    } else {
      system = h + config.lambda * hat_hessian(scaled, 1.0);
    }
    const Vector theta = system.ldlt().solve(g);

    rows.push_back({kappa, theta[0], theta[1], theta[1] / kappa});
  }
  return rows;
}

RunManifest make_manifest(const RidgeScalingConfig& config) {
  RunManifest m;
  m.experiment = "ridge-scaling";
  m.version = kVersion;
  m.params = {{"kappas", config.kappas},
              {"lambda", config.lambda},
              {"samples", config.samples},
              {"seed", config.seed},
              {"regularizer", to_string(config.regularizer)}};
  return m;
}

void write_ridge_scaling_csv(const std::filesystem::path& path, const RidgeScalingConfig& config,
                             const std::vector<RidgeScalingRow>& rows,
                             std::uint64_t manifest_hash) {
  auto file = open_out(path);
  write_hash_comment(file, manifest_hash);
  file << "kappa,lambda,samples,seed,regularizer,theta0,theta1_scaled,theta1_unscaled\n";
  for (const RidgeScalingRow& row : rows) {
    file << format_double(row.kappa) << ',' << format_double(config.lambda) << ','
         << config.samples << ',' << config.seed << ',' << to_string(config.regularizer) << ','
         << format_double(row.theta0) << ',' << format_double(row.theta1_scaled) << ','
         << format_double(row.theta1_unscaled) << "\n";
  }
}

// --- run-online --------------------------------------------------------------

namespace {

OnlineMetrics compute_metrics(const std::vector<OnlineStepRow>& rows, std::size_t skip,
                              std::size_t rank_burnin) {
  OnlineMetrics m;
  const std::size_t begin = std::min(skip, rows.size());
  const std::size_t count = rows.size() - begin;
  m.steps = count;
  if (count == 0) {
    m.mse = m.rmse = m.mse_excl_burnin = m.rmse_excl_burnin = kNaN;
    m.interval_mse_stddev = kNaN;
    return m;
  }

  const auto mse_from = [&](std::size_t first) {
    if (first >= rows.size()) return kNaN;
    double sum = 0.0;
    for (std::size_t i = first; i < rows.size(); ++i) sum += rows[i].error * rows[i].error;
    return sum / static_cast<double>(rows.size() - first);
  };

  m.mse = mse_from(begin);
  m.rmse = std::sqrt(m.mse);
  m.mse_excl_burnin = mse_from(std::max(begin, rank_burnin));
  m.rmse_excl_burnin = std::sqrt(m.mse_excl_burnin);

  if (count >= 10) {
    double interval_mse[10];
    for (int k = 0; k < 10; ++k) {
      const std::size_t lo = begin + count * static_cast<std::size_t>(k) / 10;
      const std::size_t hi = begin + count * static_cast<std::size_t>(k + 1) / 10;
      double sum = 0.0;
      for (std::size_t i = lo; i < hi; ++i) sum += rows[i].error * rows[i].error;
      interval_mse[k] = sum / static_cast<double>(hi - lo);
    }
    double mean = 0.0;
    for (const double v : interval_mse) mean += v;
    mean /= 10.0;
    double var = 0.0;
    for (const double v : interval_mse) var += (v - mean) * (v - mean);
    m.interval_mse_stddev = std::sqrt(var / 9.0);
  } else {
    m.interval_mse_stddev = kNaN;
  }
  return m;
}

}  // namespace

OnlineRunResult run_online(const OnlineRunConfig& config, const Series& series) {
  if (config.ar_order < 1) throw BadHyperparameter("run-online: ar order must be >= 1");
  if (!(config.gamma > 0.0 && config.gamma <= 1.0))
    throw BadHyperparameter("run-online: gamma must be in (0, 1]");
  if (config.lambda < 0.0) throw BadHyperparameter("run-online: lambda must be >= 0");
  if (config.skip_burnin < 0) throw BadHyperparameter("run-online: skip-burnin must be >= 0");

  const std::vector<Observation> history = ar_featurize(series.values, ArSpec{config.ar_order});
  const Eigen::Index n = config.ar_order + 1;

  OnlineRunResult result;
  result.rows.reserve(history.size());

  const auto record = [&](long step, double target, double prediction) {
    result.rows.push_back({step, target, prediction, prediction - target});
  };

  switch (config.optimizer) {
    case Optimizer::second_order: {
      // The L2 path at lambda = 0 is the same unregularized learner as the
      // invariant path; ridge_solve would reject the rank-deficient startup.
      if (config.regularizer == Regularizer::invariant || config.lambda == 0.0) {
        OnlineLearner learner(n, config.gamma, config.regularizer == Regularizer::invariant
                                                   ? config.lambda
                                                   : 0.0);
        long step = 0;
        for (const Observation& obs : history) {
          record(++step, obs.y, learner.predict(obs.x));
          learner.update(obs.x, obs.y);
        }
      } else {
        RidgeLearner learner(n, config.gamma, config.lambda);
        long step = 0;
        for (const Observation& obs : history) {
          record(++step, obs.y, learner.predict(obs.x));
          learner.update(obs.x, obs.y);
        }
      }
      break;
    }
    case Optimizer::adam:
    case Optimizer::adagrad:
    case Optimizer::rmsprop: {
      const FirstOrderVariant variant = config.optimizer == Optimizer::adam
                                            ? FirstOrderVariant::adam
                                            : (config.optimizer == Optimizer::adagrad
                                                   ? FirstOrderVariant::adagrad
                                                   : FirstOrderVariant::rmsprop);
      FirstOrderLearner learner(variant, n, config.first_order);
      long step = 0;
      for (const Observation& obs : history) {
        record(++step, obs.y, learner.predict(obs.x));
        learner.update(obs.x, obs.y);
      }
      break;
    }
    case Optimizer::naive: {
      // Predict the most recent lag, i.e. the previous target.
      long step = 0;
      for (const Observation& obs : history) record(++step, obs.y, obs.x.full[1]);
      break;
    }
  }

  result.metrics = compute_metrics(result.rows, static_cast<std::size_t>(config.skip_burnin),
                                   static_cast<std::size_t>(n));
  return result;
}

double mse_of_rows(const std::vector<OnlineStepRow>& rows, std::size_t skip) {
  if (skip >= rows.size()) return kNaN;
  double sum = 0.0;
  for (std::size_t i = skip; i < rows.size(); ++i) sum += rows[i].error * rows[i].error;
  return sum / static_cast<double>(rows.size() - skip);
}

RunManifest make_manifest(const OnlineRunConfig& config, const std::string& data_name) {
  RunManifest m;
  m.experiment = "run-online";
  m.version = kVersion;
  m.params = {{"data", data_name},
              {"ar_order", config.ar_order},
              {"regularizer", to_string(config.regularizer)},
              {"gamma", config.gamma},
              {"lambda", config.lambda},
              {"optimizer", to_string(config.optimizer)},
              {"skip_burnin", config.skip_burnin}};
  return m;
}

void write_online_csv(const std::filesystem::path& path, const std::vector<OnlineStepRow>& rows,
                      std::uint64_t manifest_hash) {
  auto file = open_out(path);
  write_hash_comment(file, manifest_hash);
  file << "step,target,prediction,error\n";
  for (const OnlineStepRow& row : rows) {
    file << row.step << ',' << format_double(row.target) << ',' << format_double(row.prediction)
         << ',' << format_double(row.error) << "\n";
  }
}

std::vector<OnlineStepRow> read_online_csv(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw FileNotFound("cannot open " + path.string());
  std::vector<OnlineStepRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(file, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.starts_with("step,")) continue;
    OnlineStepRow row;
    char* cursor = line.data();
    char* end = nullptr;
    row.step = std::strtol(cursor, &end, 10);
    if (end == cursor || *end != ',') throw ParseError(lineno, "bad step field");
    cursor = end + 1;
    row.target = std::strtod(cursor, &end);
    if (*end != ',') throw ParseError(lineno, "bad target field");
    cursor = end + 1;
    row.prediction = std::strtod(cursor, &end);
    if (*end != ',') throw ParseError(lineno, "bad prediction field");
    cursor = end + 1;
    row.error = std::strtod(cursor, &end);
    rows.push_back(row);
  }
  if (rows.empty()) throw EmptyColumn("no rows in " + path.string());
  return rows;
}

// --- sunspot-sweep -----------------------------------------------------------

std::vector<SweepRow> run_sunspot_sweep(const SunspotSweepConfig& config, const Series& series) {
  if (config.orders.empty()) throw BadHyperparameter("sunspot-sweep: no orders");
  if (config.lambdas.empty()) throw BadHyperparameter("sunspot-sweep: no lambdas");

  std::vector<Regularizer> regs;
  if (config.both)
    regs = {Regularizer::invariant, Regularizer::l2};
  else
    regs = {config.regularizer};

  std::vector<SweepRow> rows;
  rows.reserve(config.orders.size() * config.lambdas.size() * regs.size());
  for (const int order : config.orders) {
    for (const double lambda : config.lambdas) {
      for (const Regularizer reg : regs) {
        // Fig. 5 axis convention: the nominal L2 coefficient is lambda/100.
        const double effective = reg == Regularizer::l2 ? lambda / 100.0 : lambda;
        OnlineRunConfig rc;
        rc.ar_order = order;
        rc.regularizer = reg;
        rc.gamma = config.gamma;
        rc.lambda = effective;
        rc.optimizer = Optimizer::second_order;
        const OnlineRunResult result = run_online(rc, series);
        rows.push_back({order, lambda, reg, effective, result.metrics.rmse,
                        result.metrics.rmse_excl_burnin, result.metrics.steps});
      }
    }
  }
  return rows;
}

RunManifest make_manifest(const SunspotSweepConfig& config, const std::string& data_name) {
  RunManifest m;
  m.experiment = "sunspot-sweep";
  m.version = kVersion;
  m.params = {{"data", data_name},
              {"orders", config.orders},
              {"lambdas", config.lambdas},
              {"gamma", config.gamma},
              {"regularizer", config.both ? "both" : to_string(config.regularizer)}};
  return m;
}

void write_sweep_csv(const std::filesystem::path& path, const SunspotSweepConfig& config,
                     const std::vector<SweepRow>& rows, std::uint64_t manifest_hash) {
  auto file = open_out(path);
  write_hash_comment(file, manifest_hash);
  file << "order,lambda,regularizer,effective_lambda,gamma,steps,rmse,rmse_excl_burnin\n";
  for (const SweepRow& row : rows) {
    file << row.order << ',' << format_double(row.lambda) << ',' << to_string(row.regularizer)
         << ',' << format_double(row.effective_lambda) << ',' << format_double(config.gamma) << ','
         << row.steps << ',' << format_double(row.rmse) << ','
         << format_double(row.rmse_excl_burnin) << "\n";
  }
}

}  // namespace driftls
