#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vqcount/formula.hpp"
#include "vqcount/qsim.hpp"
#include "vqcount/variational.hpp"

namespace vqcount {

using Rational = boost::multiprecision::cpp_rational;

/// Where solutions come from at each self-reduction step.
enum class Backend {
  Qaoa,          // X-mixer circuit
  GmQaoa,        // Grover-mixer circuit
  ExactUniform,  // uniform over the exact solution set (test oracle)
};

std::string to_string(Backend b);
Backend backend_from_string(const std::string& text);

enum class SamplingScheme {
  WithoutReplacement,  // n_s distinct solutions, repeats discarded
  WithReplacement,     // n_s postselected draws
  Exhaustive,          // every solution of the current subproblem
};

std::string to_string(SamplingScheme s);
SamplingScheme scheme_from_string(const std::string& text);

struct SampleBudget {
  std::size_t samples_per_step = 1;
  double epsilon = 1.0 / 3.0;
  double delta = 0.25;
  SamplingScheme scheme = SamplingScheme::WithoutReplacement;
  /// Stop distinct sampling early once the subproblem's ground space is used up.
  bool cap_to_available = true;
  double stall_factor = 50.0;

  void validate() const;
};

/// n_s = ceil(c * n^2 * log(1/delta) / eps^2), or without the log factor when
/// with_log is false (the bare O(n^2/eps^2) generator-call bound).
std::size_t samples_from_bound(std::size_t n, double epsilon, double delta, double constant = 1.0,
                               bool with_log = false);

struct CircuitConfig {
  Backend backend = Backend::Qaoa;
  std::size_t depth = 3;
  OptimizerConfig optimizer;
  bool run_optimizer = true;
  /// Starting angles; TQA ramp when empty.
  std::optional<Angles> angles;
  /// Collapse the energy spectrum to 0 (solutions) / 1 (everything else).
  bool two_level_energies = false;
  std::size_t qubit_cap = kDefaultQubitCap;
};

/// Circuit angles fixed once on the full problem and reused verbatim by every
/// reduced circuit.
struct PreparedSampler {
  CircuitConfig config;
  Angles angles;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  std::size_t evaluations = 0;
};

PreparedSampler prepare_sampler(const Formula& f, const CircuitConfig& config);

struct StepRecord {
  std::uint32_t variable = 0;
  std::size_t qubits = 0;
  bool bit = false;
  Rational p_tilde{1};
  std::uint64_t raw_shots = 0;
  std::size_t postselected = 0;
  std::size_t distinct = 0;
  std::size_t used = 0;
  std::size_t subproblem_solutions = 0;
  double success_rate = 0.0;
  std::optional<double> nonuniformity;
  bool stalled = false;
};

enum class RunStatus {
  Ok,
  Unsatisfiable,  // first step found no solution at all
  Stalled,        // a later step found no solution
};

std::string to_string(RunStatus s);

struct CountEstimate {
  Rational estimate{0};
  RunStatus status = RunStatus::Ok;
  std::vector<StepRecord> steps;
  std::uint64_t total_raw_shots = 0;
  std::size_t total_postselected = 0;
  /// Distinct full assignments sampled over the whole run.
  std::size_t total_distinct_used = 0;

  double value() const { return estimate.convert_to<double>(); }
  double max_nonuniformity() const;
  double min_success_rate() const;
};

struct MajorityResult {
  bool bit = false;
  Rational p_tilde{1};
  std::size_t count = 0;
  std::size_t total = 0;
};

/// More frequent value of bit `position` across `samples` (ties -> 0) and its
/// frequency. Throws StepError on an empty sample set.
MajorityResult majority_prefix(std::span<const std::uint32_t> samples, unsigned position);

/// Self-reduction counter: prepare (optimize) once, then for each variable in
/// ascending order sample, take the majority branch, pin it, and divide the
/// running estimate by its frequency.
CountEstimate vqcount(const Formula& f, const CircuitConfig& config, const SampleBudget& budget,
                      std::uint64_t seed);
CountEstimate vqcount(const Formula& f, const PreparedSampler& sampler, const SampleBudget& budget,
                      std::uint64_t seed);

/// Brute-force solution count over the free variables. Requires <= 30 free.
std::uint64_t exact_count(const Formula& f);
/// All solutions as packed full assignments, ascending. Requires <= 24 free.
std::vector<std::uint64_t> enumerate_solutions(const Formula& f);

inline constexpr std::size_t kExactCountCap = 30;
inline constexpr std::size_t kEnumerationCap = 24;

/// (1+eps)^-1 N <= estimate <= (1+eps) N.
bool within_band(double estimate, double exact, double epsilon);
bool within_band(const Rational& estimate, std::uint64_t exact, double epsilon);

struct RejectionResult {
  std::uint64_t draws = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  bool censored = false;
};

/// Uniform random assignments until 2^n * hits / draws first lands inside the
/// multiplicative band around `exact`.
RejectionResult rejection_baseline(const Formula& f, std::uint64_t exact, double epsilon,
                                   std::uint64_t max_draws, std::uint64_t seed);

struct ScalingConstants {
  double bhmt = 1.0;
  double prior_vqa = 1.0;
  double vqcount = 1.0;
};

struct AnalyticBaselines {
  double bhmt = 0.0;
  double prior_vqa = 0.0;
  double vqcount_bound = 0.0;
};

/// Unit-constant scaling curves: sqrt(2^n / N), sqrt(N log(1/delta)) / (r eps),
/// n^2 log(1/delta) / (r eps^2).
AnalyticBaselines analytic_baselines(std::size_t n, double n_solutions, double success_rate,
                                     double epsilon, double delta, const ScalingConstants& c = {});

}  // namespace vqcount
