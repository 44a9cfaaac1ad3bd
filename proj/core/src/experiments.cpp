#include "vqcount/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "vqcount/errors.hpp"
#include "vqcount/random.hpp"

namespace vqcount {

// ---------------------------------------------------------------------------
// min_samples

MinSamplesResult min_samples(const Formula& f, const PreparedSampler& sampler, double epsilon,
                             std::uint64_t exact, std::uint64_t seed, const MinSamplesOptions& options) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (exact == 0) throw InputError("min_samples needs a satisfiable formula");
  if (options.max_samples_per_step < 1) throw InputError("max_samples_per_step must be positive");

  MinSamplesResult out;
  std::size_t n_s = 1;
  while (true) {
    SampleBudget budget;
    budget.samples_per_step = n_s;
    budget.epsilon = epsilon;
    budget.scheme = SamplingScheme::WithoutReplacement;
    budget.cap_to_available = options.cap_to_available;
    budget.stall_factor = options.stall_factor;

    out.run = vqcount(f, sampler, budget, derive_seed(seed, n_s));
    out.samples_per_step = n_s;
    out.estimate = out.run.estimate;
    out.cumulative_raw_shots += out.run.total_raw_shots;
    ++out.attempts;
    if (out.run.status != RunStatus::Ok) return out;
    if (within_band(out.run.estimate, exact, epsilon)) {
      out.within_band = true;
      return out;
    }
    if (n_s >= exact || n_s >= options.max_samples_per_step) {
      out.censored = true;
      out.estimate = Rational(static_cast<long long>(exact));
      return out;
    }
    n_s = std::min(n_s * 2, options.max_samples_per_step);
  }
}

double sampling_efficiency(std::uint64_t exact, std::size_t distinct_used) {
  if (distinct_used == 0) throw InputError("sampling efficiency needs at least one used solution");
  return static_cast<double>(exact) / static_cast<double>(distinct_used);
}

// ---------------------------------------------------------------------------
// Fits

std::string to_string(FitModel m) {
  switch (m) {
    case FitModel::Exponential: return "exp";
    case FitModel::Power: return "power";
    case FitModel::InverseEps: return "eps";
  }
  return "?";
}

FitModel fit_model_from_string(const std::string& text) {
  if (text == "exp") return FitModel::Exponential;
  if (text == "power") return FitModel::Power;
  if (text == "eps") return FitModel::InverseEps;
  throw InputError("unknown fit model '" + text + "' (expected exp, power or eps)");
}

FitResult fit_scaling(std::span<const FitPoint> points, FitModel model, std::size_t tail) {
  std::vector<std::pair<double, double>> xy;  // regressor, log y
  for (const auto& p : points) {
    if (!(p.y > 0.0) || !std::isfinite(p.y)) throw InputError("fit needs positive finite y values");
    double u = p.x;
    if (model == FitModel::Power) {
      if (!(p.x > 0.0)) throw InputError("power fit needs positive x");
      u = std::log(p.x);
    } else if (model == FitModel::InverseEps) {
      if (!(p.x > 0.0)) throw InputError("epsilon fit needs positive x");
      u = std::log(1.0 / p.x);
    }
    xy.emplace_back(u, std::log(p.y));
  }
  std::sort(xy.begin(), xy.end());
  if (tail > 0 && tail < xy.size()) xy.erase(xy.begin(), xy.end() - static_cast<std::ptrdiff_t>(tail));
  if (xy.size() < 3) throw InputError("fit needs at least three points");

  const double n = static_cast<double>(xy.size());
  double sx = 0, sy = 0;
  for (const auto& [u, v] : xy) {
    sx += u;
    sy += v;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [u, v] : xy) {
    sxx += (u - mx) * (u - mx);
    sxy += (u - mx) * (v - my);
  }
  if (sxx <= 0.0) throw InputError("fit needs at least two distinct x values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (const auto& [u, v] : xy) ss += std::pow(v - (intercept + slope * u), 2);

  FitResult r;
  r.model = model;
  r.parameter = model == FitModel::Exponential ? std::exp(slope) : slope;
  r.prefactor = std::exp(intercept);
  r.points_used = xy.size();
  r.residual = std::sqrt(ss / n);
  if (!std::isfinite(r.parameter)) throw InputError("fit produced a non-finite parameter");
  return r;
}

// ---------------------------------------------------------------------------
// Aggregation

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = s.count / 2;
  s.median = s.count % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (s.count > 1) {
    double var = 0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    var /= static_cast<double>(s.count - 1);
    s.sem = std::sqrt(var / static_cast<double>(s.count));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Sweep spec

namespace {

template <typename T>
T required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("sweep config is missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sweep config field '") + key + "': " + e.what());
  }
}

template <typename T>
void optional_field(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sweep config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw InputError("unknown field '" + key + "' in " + where);
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void SweepSpec::validate() const {
  if (sizes.empty() || depths.empty() || epsilons.empty() || backends.empty()) {
    throw InputError("sweep lists (sizes, depths, epsilons, backends) must be nonempty");
  }
  if (instances_per_size == 0) throw InputError("instances_per_size must be positive");
  for (auto n : sizes) {
    EnsembleSpec es{problem, n, alpha, 0};
    validate_spec(es);
    if (n > kEnumerationCap) throw InputError("sweep size " + std::to_string(n) + " exceeds the simulator cap");
  }
  for (double e : epsilons) {
    if (!(e > 0.0)) throw InputError("epsilons must be positive");
  }
  optimizer.validate();
}

nlohmann::json SweepSpec::to_json() const {
  nlohmann::json j;
  j["problem"] = to_string(problem);
  j["alpha"] = alpha.str();
  j["sizes"] = sizes;
  j["depths"] = depths;
  j["epsilons"] = epsilons;
  std::vector<std::string> names;
  for (auto b : backends) names.push_back(to_string(b));
  j["backends"] = names;
  j["instances_per_size"] = instances_per_size;
  j["seed"] = seed;
  j["optimizer"] = {{"max_evaluations", optimizer.max_evaluations},
                    {"tqa_dt", optimizer.tqa_dt},
                    {"tolerance", optimizer.tolerance},
                    {"initial_step", optimizer.initial_step},
                    {"gradient_refinement", optimizer.gradient_refinement}};
  j["sampling"] = {{"max_samples_per_step", sampling.max_samples_per_step},
                   {"cap_to_available", sampling.cap_to_available},
                   {"stall_factor", sampling.stall_factor}};
  j["rejection_baseline"] = rejection_baseline;
  j["rejection_max_draws"] = rejection_max_draws;
  return j;
}

SweepSpec SweepSpec::from_json(const nlohmann::json& j) {
  reject_unknown(j,
                 {"problem", "alpha", "sizes", "depths", "epsilons", "backends", "instances_per_size", "seed",
                  "optimizer", "sampling", "rejection_baseline", "rejection_max_draws", "description"},
                 "sweep config");
  SweepSpec s;
  s.problem = problem_from_string(required<std::string>(j, "problem"));
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    s.alpha = Ratio::parse(a.is_string() ? a.get<std::string>() : a.dump());
  } else {
    s.alpha = s.problem == Problem::Nae3Sat ? Ratio{1, 1} : Ratio{2, 3};
  }
  s.sizes = required<std::vector<std::size_t>>(j, "sizes");
  s.depths = required<std::vector<std::size_t>>(j, "depths");
  s.epsilons = required<std::vector<double>>(j, "epsilons");
  for (const auto& name : required<std::vector<std::string>>(j, "backends")) {
    s.backends.push_back(backend_from_string(name));
  }
  optional_field(j, "instances_per_size", s.instances_per_size);
  optional_field(j, "seed", s.seed);
  optional_field(j, "rejection_baseline", s.rejection_baseline);
  optional_field(j, "rejection_max_draws", s.rejection_max_draws);
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    reject_unknown(o, {"max_evaluations", "tqa_dt", "tolerance", "initial_step", "gradient_refinement"},
                   "optimizer section");
    optional_field(o, "max_evaluations", s.optimizer.max_evaluations);
    optional_field(o, "tqa_dt", s.optimizer.tqa_dt);
    optional_field(o, "tolerance", s.optimizer.tolerance);
    optional_field(o, "initial_step", s.optimizer.initial_step);
    optional_field(o, "gradient_refinement", s.optimizer.gradient_refinement);
  }
  if (j.contains("sampling")) {
    const auto& o = j.at("sampling");
    reject_unknown(o, {"max_samples_per_step", "cap_to_available", "stall_factor"}, "sampling section");
    optional_field(o, "max_samples_per_step", s.sampling.max_samples_per_step);
    optional_field(o, "cap_to_available", s.sampling.cap_to_available);
    optional_field(o, "stall_factor", s.sampling.stall_factor);
  }
  s.validate();
  return s;
}

std::uint64_t SweepSpec::config_hash() const {
  nlohmann::json j = to_json();
  for (const char* key : {"sizes", "depths", "epsilons", "backends", "instances_per_size"}) j.erase(key);
  return fnv1a(j.dump());
}

EnsembleSpec sweep_instance(const SweepSpec& spec, std::size_t n, std::size_t index) {
  const std::uint64_t per_size = derive_seed(derive_seed(spec.seed, streams::kInstance), n);
  return EnsembleSpec{spec.problem, n, spec.alpha, derive_seed(per_size, index)};
}

// ---------------------------------------------------------------------------
// Sweep execution

namespace {

struct WorkUnit {
  std::size_t n;
  std::size_t instance;
  Backend backend;
  std::size_t depth;
  std::vector<std::size_t> eps_indices;  // rows still missing
};

std::string row_identity(const SweepSpec& spec, std::size_t n, std::size_t instance, Backend b,
                         std::size_t depth, double eps) {
  return to_string(spec.problem) + "|" + spec.alpha.str() + "|" + std::to_string(n) + "|" +
         std::to_string(instance) + "|" + to_string(b) + "|" + std::to_string(depth) + "|" + format_double(eps);
}

std::vector<SweepRow> run_unit(const SweepSpec& spec, const WorkUnit& unit) {
  const EnsembleSpec es = sweep_instance(spec, unit.n, unit.instance);
  const std::string config_hash = hex64(spec.config_hash());

  std::vector<SweepRow> rows;
  for (auto ei : unit.eps_indices) {
    SweepRow row;
    const double eps = spec.epsilons[ei];
    const std::string identity = row_identity(spec, unit.n, unit.instance, unit.backend, unit.depth, eps);
    row.row_key = hex64(fnv1a(identity + "|" + config_hash));
    row.problem = to_string(spec.problem);
    row.alpha = spec.alpha.str();
    row.n = unit.n;
    row.instance = unit.instance;
    row.instance_seed = es.seed;
    row.backend = to_string(unit.backend);
    row.depth = unit.depth;
    row.epsilon = eps;
    row.run_seed = derive_seed(derive_seed(es.seed, streams::kRun), fnv1a(identity));
    row.config_hash = config_hash;
    rows.push_back(row);
  }

  try {
    const Formula f = generate(es);
    const std::string ihash = hex64(instance_hash(f));
    const std::uint64_t exact = exact_count(f);
    for (auto& row : rows) {
      row.instance_hash = ihash;
      row.n_solutions = exact;
    }
    if (exact == 0) {
      for (auto& row : rows) row.status = "unsat";
      return rows;
    }

    CircuitConfig cc;
    cc.backend = unit.backend;
    cc.depth = unit.depth;
    cc.optimizer = spec.optimizer;
    cc.optimizer.seed = derive_seed(derive_seed(es.seed, streams::kOptimizer),
                                    fnv1a(to_string(unit.backend) + std::to_string(unit.depth)));
    const PreparedSampler sampler = prepare_sampler(f, cc);

    for (auto& row : rows) {
      row.energy_initial = sampler.initial_energy;
      row.energy_final = sampler.final_energy;
      row.evaluations = sampler.evaluations;

      const MinSamplesResult ms = min_samples(f, sampler, row.epsilon, exact, row.run_seed, spec.sampling);
      const CountEstimate& run = ms.run;
      row.status = run.status == RunStatus::Ok ? (ms.censored ? "censored" : "ok") : to_string(run.status);
      row.samples_per_step = ms.samples_per_step;
      row.attempts = ms.attempts;
      row.raw_shots = run.total_raw_shots;
      row.cumulative_raw_shots = ms.cumulative_raw_shots;
      row.postselected = run.total_postselected;
      row.distinct_used = run.total_distinct_used;
      row.estimate = ms.estimate.convert_to<double>();
      row.accuracy = row.estimate / static_cast<double>(exact);
      row.sampling_efficiency =
          run.total_distinct_used > 0 ? sampling_efficiency(exact, run.total_distinct_used) : 0.0;
      row.r_root = run.steps.empty() ? 0.0 : run.steps.front().success_rate;
      row.min_r = run.min_success_rate();
      row.max_eta = run.max_nonuniformity();
      for (const auto& s : run.steps) {
        row.step_r.push_back(s.success_rate);
        row.step_eta.push_back(s.nonuniformity.value_or(-1.0));
      }
      if (spec.rejection_baseline) {
        const auto rej = rejection_baseline(f, exact, row.epsilon, spec.rejection_max_draws,
                                            derive_seed(derive_seed(es.seed, streams::kBaseline),
                                                        fnv1a(format_double(row.epsilon))));
        row.rejection_draws = rej.draws;
        row.rejection_censored = rej.censored;
      }
    }
  } catch (const Error& e) {
    for (auto& row : rows) {
      if (row.status.empty()) row.status = "error";
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, const std::vector<SweepRow>& existing,
                            const SweepOptions& options) {
  spec.validate();
  const std::string config_hash = hex64(spec.config_hash());
  std::map<std::string, SweepRow> have;
  for (const auto& row : existing) have.emplace(row.row_key, row);

  // Canonical order: size, instance, backend, depth, epsilon.
  std::vector<std::string> order;
  std::vector<WorkUnit> pending;
  std::size_t budget = options.max_new_rows.value_or(SIZE_MAX);
  for (auto n : spec.sizes) {
    for (std::size_t i = 0; i < spec.instances_per_size; ++i) {
      for (auto b : spec.backends) {
        for (auto p : spec.depths) {
          WorkUnit unit{n, i, b, p, {}};
          for (std::size_t e = 0; e < spec.epsilons.size(); ++e) {
            const std::string key =
                hex64(fnv1a(row_identity(spec, n, i, b, p, spec.epsilons[e]) + "|" + config_hash));
            order.push_back(key);
            if (!have.count(key) && budget > 0) {
              unit.eps_indices.push_back(e);
              --budget;
            }
          }
          if (!unit.eps_indices.empty()) pending.push_back(std::move(unit));
        }
      }
    }
  }

  std::vector<std::vector<SweepRow>> results(pending.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < pending.size(); u = next++) results[u] = run_unit(spec, pending[u]);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, pending.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (auto& unit_rows : results) {
    for (auto& row : unit_rows) have.insert_or_assign(row.row_key, std::move(row));
  }

  std::vector<SweepRow> out;
  for (const auto& key : order) {
    if (auto it = have.find(key); it != have.end()) out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> columns = {
      "row_key", "problem", "alpha", "n", "instance", "instance_seed", "instance_hash", "backend", "p", "eps",
      "run_seed", "config_hash", "status", "n_solutions", "energy_initial", "energy_final", "evaluations",
      "r_root", "min_r", "max_eta", "samples_per_step", "attempts", "raw_shots", "cumulative_raw_shots",
      "postselected", "distinct_used", "estimate", "accuracy", "sampling_efficiency", "rejection_draws",
      "rejection_censored", "step_r", "step_eta"};
  return columns;
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "' in CSV");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ParseError("bad integer '" + s + "' in CSV");
  return v;
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto end = s.find(';', start);
    out.push_back(parse_double(s.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(',', start);
    out.push_back(line.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  const auto& cols = sweep_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << r.row_key << ',' << r.problem << ',' << r.alpha << ',' << r.n << ',' << r.instance << ','
        << r.instance_seed << ',' << r.instance_hash << ',' << r.backend << ',' << r.depth << ','
        << format_double(r.epsilon) << ',' << r.run_seed << ',' << r.config_hash << ',' << r.status << ','
        << r.n_solutions << ',' << format_double(r.energy_initial) << ',' << format_double(r.energy_final) << ','
        << r.evaluations << ',' << format_double(r.r_root) << ',' << format_double(r.min_r) << ','
        << format_double(r.max_eta) << ',' << r.samples_per_step << ',' << r.attempts << ',' << r.raw_shots << ','
        << r.cumulative_raw_shots << ',' << r.postselected << ',' << r.distinct_used << ','
        << format_double(r.estimate) << ',' << format_double(r.accuracy) << ','
        << format_double(r.sampling_efficiency) << ',' << r.rejection_draws << ','
        << (r.rejection_censored ? 1 : 0) << ',' << join_doubles(r.step_r) << ',' << join_doubles(r.step_eta)
        << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  std::vector<SweepRow> rows;
  if (!std::getline(in, line)) return rows;
  if (split_commas(line) != sweep_csv_columns()) throw ParseError("sweep CSV header does not match", 1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != sweep_csv_columns().size()) throw ParseError("wrong number of CSV fields", line_no);
    SweepRow r;
    std::size_t i = 0;
    r.row_key = f[i++];
    r.problem = f[i++];
    r.alpha = f[i++];
    r.n = parse_u64(f[i++]);
    r.instance = parse_u64(f[i++]);
    r.instance_seed = parse_u64(f[i++]);
    r.instance_hash = f[i++];
    r.backend = f[i++];
    r.depth = parse_u64(f[i++]);
    r.epsilon = parse_double(f[i++]);
    r.run_seed = parse_u64(f[i++]);
    r.config_hash = f[i++];
    r.status = f[i++];
    r.n_solutions = parse_u64(f[i++]);
    r.energy_initial = parse_double(f[i++]);
    r.energy_final = parse_double(f[i++]);
    r.evaluations = parse_u64(f[i++]);
    r.r_root = parse_double(f[i++]);
    r.min_r = parse_double(f[i++]);
    r.max_eta = parse_double(f[i++]);
    r.samples_per_step = parse_u64(f[i++]);
    r.attempts = parse_u64(f[i++]);
    r.raw_shots = parse_u64(f[i++]);
    r.cumulative_raw_shots = parse_u64(f[i++]);
    r.postselected = parse_u64(f[i++]);
    r.distinct_used = parse_u64(f[i++]);
    r.estimate = parse_double(f[i++]);
    r.accuracy = parse_double(f[i++]);
    r.sampling_efficiency = parse_double(f[i++]);
    r.rejection_draws = parse_u64(f[i++]);
    r.rejection_censored = parse_u64(f[i++]) != 0;
    r.step_r = split_doubles(f[i++]);
    r.step_eta = split_doubles(f[i++]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::size_t, std::string, std::size_t, double>;
  std::map<Key, std::vector<const SweepRow*>> groups;
  std::vector<Key> order;
  for (const auto& r : rows) {
    Key key{r.problem, r.alpha, r.n, r.backend, r.depth, r.epsilon};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }

  std::vector<AggregateRow> out;
  for (const auto& key : order) {
    const auto& members = groups.at(key);
    AggregateRow a;
    std::tie(a.problem, a.alpha, a.n, a.backend, a.depth, a.epsilon) = key;
    std::vector<double> raw, post, distinct, min_r, max_eta, acc, eff, rej;
    for (const SweepRow* r : members) {
      if (!r->usable()) {
        ++a.excluded;
        continue;
      }
      ++a.included;
      raw.push_back(static_cast<double>(r->raw_shots));
      post.push_back(static_cast<double>(r->postselected));
      distinct.push_back(static_cast<double>(r->distinct_used));
      min_r.push_back(r->min_r);
      max_eta.push_back(r->max_eta);
      acc.push_back(r->accuracy);
      eff.push_back(r->sampling_efficiency);
      if (!r->rejection_censored && r->rejection_draws > 0) rej.push_back(static_cast<double>(r->rejection_draws));
    }
    a.raw_shots = summarize(raw);
    a.postselected = summarize(post);
    a.distinct_used = summarize(distinct);
    a.min_r = summarize(min_r);
    a.max_eta = summarize(max_eta);
    a.accuracy = summarize(acc);
    a.sampling_efficiency = summarize(eff);
    a.rejection_draws = summarize(rej);
    out.push_back(std::move(a));
  }
  return out;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << "problem,alpha,n,backend,p,eps,included,excluded";
  for (const char* name : {"raw_shots", "postselected", "distinct_used", "min_r", "max_eta", "accuracy",
                           "sampling_efficiency", "rejection_draws"}) {
    out << ',' << name << "_mean," << name << "_median," << name << "_sem";
  }
  out << '\n';
  for (const auto& a : rows) {
    out << a.problem << ',' << a.alpha << ',' << a.n << ',' << a.backend << ',' << a.depth << ','
        << format_double(a.epsilon) << ',' << a.included << ',' << a.excluded;
    for (const Summary* s : {&a.raw_shots, &a.postselected, &a.distinct_used, &a.min_r, &a.max_eta, &a.accuracy,
                             &a.sampling_efficiency, &a.rejection_draws}) {
      out << ',' << format_double(s->mean) << ',' << format_double(s->median) << ',' << format_double(s->sem);
    }
    out << '\n';
  }
}

nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["config"] = spec.to_json();
  j["config_hash"] = hex64(spec.config_hash());
  auto& out_rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    out_rows.push_back({{"row_key", r.row_key},
                        {"problem", r.problem},
                        {"alpha", r.alpha},
                        {"n", r.n},
                        {"instance", r.instance},
                        {"instance_seed", r.instance_seed},
                        {"instance_hash", r.instance_hash},
                        {"backend", r.backend},
                        {"p", r.depth},
                        {"eps", r.epsilon},
                        {"run_seed", r.run_seed},
                        {"config_hash", r.config_hash},
                        {"status", r.status},
                        {"n_solutions", r.n_solutions},
                        {"energy", {{"initial", r.energy_initial}, {"final", r.energy_final}}},
                        {"evaluations", r.evaluations},
                        {"success_rate", {{"root", r.r_root}, {"min", r.min_r}, {"per_step", r.step_r}}},
                        {"nonuniformity", {{"max", r.max_eta}, {"per_step", r.step_eta}}},
                        {"samples_per_step", r.samples_per_step},
                        {"attempts", r.attempts},
                        {"raw_shots", r.raw_shots},
                        {"cumulative_raw_shots", r.cumulative_raw_shots},
                        {"postselected", r.postselected},
                        {"distinct_used", r.distinct_used},
                        {"estimate", r.estimate},
                        {"accuracy", r.accuracy},
                        {"sampling_efficiency", r.sampling_efficiency},
                        {"rejection", {{"draws", r.rejection_draws}, {"censored", r.rejection_censored}}}});
  }
  auto& agg = j["aggregate"] = nlohmann::json::array();
  for (const auto& a : aggregate(rows)) {
    auto summary = [](const Summary& s) {
      return nlohmann::json{{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"sem", s.sem}};
    };
    agg.push_back({{"problem", a.problem},
                   {"alpha", a.alpha},
                   {"n", a.n},
                   {"backend", a.backend},
                   {"p", a.depth},
                   {"eps", a.epsilon},
                   {"included", a.included},
                   {"excluded", a.excluded},
                   {"raw_shots", summary(a.raw_shots)},
                   {"postselected", summary(a.postselected)},
                   {"distinct_used", summary(a.distinct_used)},
                   {"min_r", summary(a.min_r)},
                   {"max_eta", summary(a.max_eta)},
                   {"accuracy", summary(a.accuracy)},
                   {"sampling_efficiency", summary(a.sampling_efficiency)},
                   {"rejection_draws", summary(a.rejection_draws)}});
  }
  return j;
}

}  // namespace vqcount
