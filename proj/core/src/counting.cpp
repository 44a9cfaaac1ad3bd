#include "vqcount/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "vqcount/errors.hpp"
#include "vqcount/random.hpp"

namespace vqcount {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Qaoa: return "qaoa";
    case Backend::GmQaoa: return "gmqaoa";
    case Backend::ExactUniform: return "uniform";
  }
  return "?";
}

Backend backend_from_string(const std::string& text) {
  if (text == "qaoa") return Backend::Qaoa;
  if (text == "gmqaoa") return Backend::GmQaoa;
  if (text == "uniform") return Backend::ExactUniform;
  throw InputError("unknown backend '" + text + "' (expected qaoa, gmqaoa or uniform)");
}

std::string to_string(SamplingScheme s) {
  switch (s) {
    case SamplingScheme::WithoutReplacement: return "distinct";
    case SamplingScheme::WithReplacement: return "replacement";
    case SamplingScheme::Exhaustive: return "exhaustive";
  }
  return "?";
}

SamplingScheme scheme_from_string(const std::string& text) {
  if (text == "distinct") return SamplingScheme::WithoutReplacement;
  if (text == "replacement") return SamplingScheme::WithReplacement;
  if (text == "exhaustive") return SamplingScheme::Exhaustive;
  throw InputError("unknown sampling scheme '" + text + "' (expected distinct, replacement or exhaustive)");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Unsatisfiable: return "unsat";
    case RunStatus::Stalled: return "stalled";
  }
  return "?";
}

void SampleBudget::validate() const {
  if (samples_per_step < 1) throw InputError("samples per step must be at least 1");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!(stall_factor > 0.0)) throw InputError("stall factor must be positive");
}

std::size_t samples_from_bound(std::size_t n, double epsilon, double delta, double constant,
                               bool with_log) {
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) throw InputError("invalid epsilon/delta");
  double v = constant * static_cast<double>(n * n) / (epsilon * epsilon);
  if (with_log) v *= std::log(1.0 / delta);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(v - 1e-9)));
}

double CountEstimate::max_nonuniformity() const {
  double m = 0.0;
  for (const auto& s : steps) {
    if (s.nonuniformity) m = std::max(m, *s.nonuniformity);
  }
  return m;
}

double CountEstimate::min_success_rate() const {
  double m = 1.0;
  for (const auto& s : steps) m = std::min(m, s.success_rate);
  return steps.empty() ? 0.0 : m;
}

MajorityResult majority_prefix(std::span<const std::uint32_t> samples, unsigned position) {
  if (samples.empty()) throw StepError("majority_prefix needs at least one sample");
  std::size_t ones = 0;
  for (auto x : samples) ones += (x >> position) & 1U;
  const std::size_t zeros = samples.size() - ones;
  MajorityResult r;
  r.bit = ones > zeros;
  r.count = r.bit ? ones : zeros;
  r.total = samples.size();
  r.p_tilde = Rational(static_cast<long long>(r.count), static_cast<long long>(r.total));
  return r;
}

namespace {

EnergyVector energies_for(const Formula& f, const CircuitConfig& config) {
  EnergyVector ev = energy_vector(build_ising(f), config.qubit_cap);
  return config.two_level_energies ? two_level(ev) : ev;
}

StateVector uniform_over(const std::vector<std::uint32_t>& solutions, std::size_t dim) {
  StateVector psi;
  psi.amps.assign(dim, Amplitude{0.0});
  if (solutions.empty()) return psi;
  const double a = 1.0 / std::sqrt(static_cast<double>(solutions.size()));
  for (auto x : solutions) psi.amps[x] = a;
  return psi;
}

}  // namespace

PreparedSampler prepare_sampler(const Formula& f, const CircuitConfig& config) {
  PreparedSampler out;
  out.config = config;
  if (config.backend == Backend::ExactUniform) return out;

  config.optimizer.validate();
  out.angles = config.angles ? *config.angles : tqa_init(config.depth, config.optimizer.tqa_dt);
  if (out.angles.betas.size() != config.depth || out.angles.gammas.size() != config.depth) {
    throw InputError("starting angles do not match the circuit depth");
  }
  const Mixer mixer = config.backend == Backend::Qaoa ? Mixer::X : Mixer::Grover;
  QaoaCircuit circuit = make_circuit(mixer, energies_for(f, config), out.angles.betas, out.angles.gammas);
  if (config.run_optimizer && config.depth > 0) {
    OptimizationResult opt = optimize(circuit, config.optimizer);
    out.angles = {opt.circuit.betas, opt.circuit.gammas};
    out.initial_energy = opt.initial_energy;
    out.final_energy = opt.final_energy;
    out.evaluations = opt.evaluations;
  } else {
    out.initial_energy = out.final_energy = energy_expectation(run_circuit(circuit), circuit.energy.values);
  }
  return out;
}

CountEstimate vqcount(const Formula& f, const CircuitConfig& config, const SampleBudget& budget,
                      std::uint64_t seed) {
  CircuitConfig seeded = config;
  seeded.optimizer.seed = derive_seed(seed, streams::kOptimizer);
  return vqcount(f, prepare_sampler(f, seeded), budget, seed);
}

CountEstimate vqcount(const Formula& f, const PreparedSampler& sampler, const SampleBudget& budget,
                      std::uint64_t seed) {
  budget.validate();
  const CircuitConfig& config = sampler.config;
  const bool uses_circuit = config.backend != Backend::ExactUniform;
  const Mixer mixer = config.backend == Backend::Qaoa ? Mixer::X : Mixer::Grover;

  Formula current = f;
  QaoaCircuit circuit = make_circuit(mixer, energies_for(current, config), sampler.angles.betas,
                                     sampler.angles.gammas);
  Rng rng(derive_seed(seed, streams::kShots));

  const SampleMode mode = budget.scheme == SamplingScheme::WithReplacement
                              ? SampleMode::WithReplacement
                              : SampleMode::WithoutReplacement;
  const SampleRequest request{budget.samples_per_step, mode, budget.cap_to_available,
                              budget.stall_factor};

  CountEstimate out;
  out.estimate = 1;
  std::set<std::uint64_t> used_assignments;

  while (auto var = current.next_free_var()) {
    const StateVector psi = uses_circuit ? run_circuit(circuit, config.qubit_cap)
                                         : uniform_over(circuit.solutions, circuit.energy.size());
    const OutputMetrics m = metrics(psi, circuit);

    StepRecord step;
    step.variable = *var;
    step.qubits = circuit.qubits();
    step.subproblem_solutions = circuit.solutions.size();
    step.success_rate = m.success_rate;
    step.nonuniformity = m.nonuniformity;

    SampleRecord rec;
    if (budget.scheme == SamplingScheme::Exhaustive) {
      rec.distinct = circuit.solutions;
      rec.postselected = circuit.solutions;
    } else {
      rec = sample_solutions(psi, circuit.solutions, request, rng);
    }
    const auto& used = rec.used(mode);
    step.raw_shots = rec.raw_shots;
    step.postselected = rec.postselected.size();
    step.distinct = rec.distinct.size();
    step.used = used.size();
    step.stalled = rec.stalled;
    out.total_raw_shots += rec.raw_shots;
    out.total_postselected += rec.postselected.size();

    if (used.empty()) {
      out.status = out.steps.empty() ? RunStatus::Unsatisfiable : RunStatus::Stalled;
      if (out.status == RunStatus::Unsatisfiable) out.estimate = 0;
      out.steps.push_back(step);
      break;
    }

    const MajorityResult maj = majority_prefix(used, 0);
    step.bit = maj.bit;
    step.p_tilde = maj.p_tilde;
    out.steps.push_back(step);
    for (auto x : rec.distinct) used_assignments.insert(current.expand(x));

    out.estimate /= maj.p_tilde;
    current = current.fix_variable(*var, maj.bit);
    circuit = reduce_circuit(circuit, maj.bit, energies_for(current, config));
  }
  out.total_distinct_used = used_assignments.size();
  return out;
}

namespace {

// Free-configuration -> full assignment through two lookup tables.
class Expander {
 public:
  explicit Expander(const Formula& f) : k_(f.n_vars() - f.n_pinned()) {
    lo_bits_ = std::min<std::size_t>(k_, 12);
    lo_.resize(std::size_t{1} << lo_bits_);
    hi_.resize(std::size_t{1} << (k_ - lo_bits_));
    for (std::uint64_t c = 0; c < lo_.size(); ++c) lo_[c] = f.expand(c);
    for (std::uint64_t c = 0; c < hi_.size(); ++c) hi_[c] = f.expand(c << lo_bits_);
  }
  std::uint64_t operator()(std::uint64_t c) const {
    return lo_[c & (lo_.size() - 1)] | hi_[c >> lo_bits_];
  }
  std::size_t qubits() const { return k_; }

 private:
  std::size_t k_;
  std::size_t lo_bits_;
  std::vector<std::uint64_t> lo_;
  std::vector<std::uint64_t> hi_;
};

}  // namespace

std::uint64_t exact_count(const Formula& f) {
  const std::size_t k = f.n_vars() - f.n_pinned();
  if (k > kExactCountCap) throw ResourceError("exact_count is limited to 30 free variables");
  const Expander expand(f);
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t c = 0; c < total; ++c) count += f.clauses_satisfied(expand(c));
  return count;
}

std::vector<std::uint64_t> enumerate_solutions(const Formula& f) {
  const std::size_t k = f.n_vars() - f.n_pinned();
  if (k > kEnumerationCap) throw ResourceError("enumeration is limited to 24 free variables");
  const Expander expand(f);
  std::vector<std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t c = 0; c < total; ++c) {
    const auto bits = expand(c);
    if (f.clauses_satisfied(bits)) out.push_back(bits);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool within_band(double estimate, double exact, double epsilon) {
  return estimate * (1.0 + epsilon) >= exact && estimate <= (1.0 + epsilon) * exact;
}

bool within_band(const Rational& estimate, std::uint64_t exact, double epsilon) {
  return within_band(estimate.convert_to<double>(), static_cast<double>(exact), epsilon);
}

RejectionResult rejection_baseline(const Formula& f, std::uint64_t exact, double epsilon,
                                   std::uint64_t max_draws, std::uint64_t seed) {
  const std::size_t k = f.n_vars() - f.n_pinned();
  if (k > 62) throw ResourceError("rejection baseline supports at most 62 free variables");
  const double space = std::ldexp(1.0, static_cast<int>(k));
  const Expander expand(f);
  Rng rng(seed);
  const std::uint64_t total = std::uint64_t{1} << k;
  RejectionResult r;
  while (r.draws < max_draws) {
    ++r.draws;
    r.hits += f.clauses_satisfied(expand(rng.below(total)));
    r.estimate = space * static_cast<double>(r.hits) / static_cast<double>(r.draws);
    if (within_band(r.estimate, static_cast<double>(exact), epsilon)) return r;
  }
  r.censored = true;
  return r;
}

AnalyticBaselines analytic_baselines(std::size_t n, double n_solutions, double success_rate,
                                     double epsilon, double delta, const ScalingConstants& c) {
  if (n == 0 || !(n_solutions > 0) || !(success_rate > 0) || !(epsilon > 0) || !(delta > 0 && delta < 1)) {
    throw InputError("analytic baselines need positive arguments");
  }
  const double log_inv_delta = std::log(1.0 / delta);
  AnalyticBaselines b;
  b.bhmt = c.bhmt * std::sqrt(std::ldexp(1.0, static_cast<int>(n)) / n_solutions);
  b.prior_vqa = c.prior_vqa * std::sqrt(n_solutions * log_inv_delta) / (success_rate * epsilon);
  b.vqcount_bound = c.vqcount * static_cast<double>(n * n) * log_inv_delta / (success_rate * epsilon * epsilon);
  return b;
}

}  // namespace vqcount
