#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqcount/counting.hpp"
#include "vqcount/instances.hpp"

namespace vqcount {

// ---------------------------------------------------------------------------
// Minimum samples per step and sampling efficiency

struct MinSamplesOptions {
  std::size_t max_samples_per_step = std::size_t{1} << 16;
  bool cap_to_available = true;
  double stall_factor = 50.0;
};

struct MinSamplesResult {
  std::size_t samples_per_step = 0;
  bool within_band = false;
  /// Doubling passed the solution count or the configured maximum without
  /// landing in the band; `estimate` then holds the exact count.
  bool censored = false;
  std::size_t attempts = 0;
  std::uint64_t cumulative_raw_shots = 0;
  Rational estimate{0};
  CountEstimate run;  // the final attempt
};

/// Runs the counter with n_s = 1, 2, 4, ... until the estimate lies in the
/// multiplicative band around `exact`. The sampler is prepared once by the
/// caller; each attempt gets its own shot stream.
MinSamplesResult min_samples(const Formula& f, const PreparedSampler& sampler, double epsilon,
                             std::uint64_t exact, std::uint64_t seed,
                             const MinSamplesOptions& options = {});

/// Exact count over distinct solutions consumed.
double sampling_efficiency(std::uint64_t exact, std::size_t distinct_used);

// ---------------------------------------------------------------------------
// Scaling fits

enum class FitModel {
  Exponential,  // y = a * base^n
  Power,        // y = a * n^k
  InverseEps,   // y = a * eps^-k, x is eps
};

std::string to_string(FitModel m);
FitModel fit_model_from_string(const std::string& text);

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
};

struct FitResult {
  FitModel model = FitModel::Exponential;
  /// Base for Exponential, exponent otherwise.
  double parameter = 0.0;
  double prefactor = 0.0;
  std::size_t points_used = 0;
  /// RMS residual in log space.
  double residual = 0.0;
};

/// Least squares in log space over the last `tail` points ordered by the
/// regressor (tail == 0 uses all). Needs at least three points, all positive.
FitResult fit_scaling(std::span<const FitPoint> points, FitModel model, std::size_t tail = 0);

// ---------------------------------------------------------------------------
// Aggregation

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double sem = 0.0;  // standard error of the mean
};

Summary summarize(std::span<const double> values);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepSpec {
  Problem problem = Problem::Nae3Sat;
  Ratio alpha{1, 1};
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> depths;
  std::vector<double> epsilons;
  std::vector<Backend> backends;
  std::size_t instances_per_size = 20;
  std::uint64_t seed = 1;
  OptimizerConfig optimizer;
  MinSamplesOptions sampling;
  bool rejection_baseline = true;
  std::uint64_t rejection_max_draws = 100'000'000;

  void validate() const;
  nlohmann::json to_json() const;
  /// Rejects unknown fields, naming them.
  static SweepSpec from_json(const nlohmann::json& j);
  /// Hash of everything that affects a row except the grid lists.
  std::uint64_t config_hash() const;
};

struct SweepRow {
  std::string row_key;
  std::string problem;
  std::string alpha;
  std::size_t n = 0;
  std::size_t instance = 0;
  std::uint64_t instance_seed = 0;
  std::string instance_hash;
  std::string backend;
  std::size_t depth = 0;
  double epsilon = 0.0;
  std::uint64_t run_seed = 0;
  std::string config_hash;
  std::string status;  // ok | censored | unsat | stalled | error
  std::uint64_t n_solutions = 0;
  double energy_initial = 0.0;
  double energy_final = 0.0;
  std::size_t evaluations = 0;
  double r_root = 0.0;
  double min_r = 0.0;
  double max_eta = 0.0;
  std::size_t samples_per_step = 0;
  std::size_t attempts = 0;
  std::uint64_t raw_shots = 0;
  std::uint64_t cumulative_raw_shots = 0;
  std::size_t postselected = 0;
  std::size_t distinct_used = 0;
  double estimate = 0.0;
  double accuracy = 0.0;
  double sampling_efficiency = 0.0;
  std::uint64_t rejection_draws = 0;
  bool rejection_censored = false;
  std::vector<double> step_r;
  std::vector<double> step_eta;

  bool usable() const { return status == "ok"; }
};

struct SweepOptions {
  std::size_t jobs = 1;
  /// Stop after producing this many new rows (partial runs, resume tests).
  std::optional<std::size_t> max_new_rows;
};

/// Evaluates every grid cell not already present in `existing` (matched by
/// row_key) and returns the complete set in canonical grid order.
std::vector<SweepRow> sweep(const SweepSpec& spec, const std::vector<SweepRow>& existing = {},
                            const SweepOptions& options = {});

/// Instance `index` of size `n` in the sweep's ensemble.
EnsembleSpec sweep_instance(const SweepSpec& spec, std::size_t n, std::size_t index);

const std::vector<std::string>& sweep_csv_columns();
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

struct AggregateRow {
  std::string problem;
  std::string alpha;
  std::size_t n = 0;
  std::string backend;
  std::size_t depth = 0;
  double epsilon = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;
  Summary raw_shots;
  Summary postselected;
  Summary distinct_used;
  Summary min_r;
  Summary max_eta;
  Summary accuracy;
  Summary sampling_efficiency;
  Summary rejection_draws;
};

/// Groups by (problem, alpha, n, backend, depth, eps) over usable rows.
std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);

nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace vqcount
