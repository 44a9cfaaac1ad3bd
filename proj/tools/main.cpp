#ifdef VQCOUNT_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "vqcount/counting.hpp"
#include "vqcount/errors.hpp"
#include "vqcount/experiments.hpp"
#include "vqcount/formula.hpp"
#include "vqcount/instances.hpp"
#include "vqcount/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vqcount;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kInput = 3, kResource = 4, kStall = 5 };

struct UsageError : Error {
  using Error::Error;
};

struct GenArgs {
  std::string problem = "nae3sat";
  std::string alpha;
  std::size_t n = 0;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  std::string out = ".";
  bool with_count = false;
  bool json_out = false;
};

struct CountArgs {
  std::string path;
  bool exact = false;
  std::string backend = "qaoa";
  std::size_t depth = 3;
  std::optional<std::size_t> ns;
  double eps = 1.0 / 3.0;
  double delta = 0.25;
  std::string scheme = "distinct";
  std::uint64_t seed = 1;
  std::size_t max_evals = 500;
  double tqa_dt = 0.75;
  bool no_optimize = false;
  bool two_level = false;
  bool check = false;
  std::size_t qubit_cap = kDefaultQubitCap;
};

struct SweepArgs {
  std::string config;
  std::string out = "sweep";
  bool resume = false;
  std::size_t jobs = 1;
  std::optional<std::size_t> max_rows;
  bool json_out = false;
};

struct FitArgs {
  std::string path;
  std::string model = "exp";
  std::size_t tail = 0;
  std::string metric = "raw_shots";
  std::string backend;
  std::optional<std::size_t> depth;
  std::optional<double> eps;
  std::optional<std::size_t> n;
  bool json_out = false;
};

std::string file_name(const std::string& problem, std::size_t n, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_n%zu_%03zu.vqc", problem.c_str(), n, index);
  return buf;
}

int cmd_gen(const GenArgs& a) {
  EnsembleSpec spec;
  try {
    spec.problem = problem_from_string(a.problem);
    spec.n_vars = a.n;
    spec.alpha = a.alpha.empty() ? (spec.problem == Problem::Nae3Sat ? Ratio{1, 1} : Ratio{2, 3})
                                 : Ratio::parse(a.alpha);
    validate_spec(spec);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  if (a.count == 0) throw UsageError("--count must be positive");

  fs::create_directories(a.out);
  const std::uint64_t per_size = derive_seed(derive_seed(a.seed, streams::kInstance), a.n);
  json files = json::array();
  for (std::size_t i = 0; i < a.count; ++i) {
    spec.seed = derive_seed(per_size, i);
    const Formula f = generate(spec);
    const fs::path path = fs::path(a.out) / file_name(to_string(spec.problem), a.n, i);
    write_instance(f, path);
    json entry{{"path", path.string()}, {"seed", spec.seed}, {"instance_hash", hex64(instance_hash(f))}};
    if (a.with_count && f.n_vars() <= kExactCountCap) entry["n_solutions"] = exact_count(f);
    files.push_back(entry);
    if (!a.json_out) {
      std::cout << path.string();
      if (entry.contains("n_solutions")) std::cout << "  N=" << entry["n_solutions"].get<std::uint64_t>();
      std::cout << '\n';
    }
  }
  if (a.json_out) {
    json doc{{"config",
              {{"problem", to_string(spec.problem)},
               {"alpha", spec.alpha.str()},
               {"n", a.n},
               {"count", a.count},
               {"seed", a.seed}}},
             {"files", files}};
    std::cout << doc.dump(2) << '\n';
  }
  return kOk;
}

json step_json(const StepRecord& s) {
  json j{{"variable", s.variable},
         {"qubits", s.qubits},
         {"bit", s.bit ? 1 : 0},
         {"p_tilde", s.p_tilde.str()},
         {"raw_shots", s.raw_shots},
         {"postselected", s.postselected},
         {"distinct", s.distinct},
         {"used", s.used},
         {"subproblem_solutions", s.subproblem_solutions},
         {"success_rate", s.success_rate},
         {"stalled", s.stalled}};
  j["nonuniformity"] = s.nonuniformity ? json(*s.nonuniformity) : json(nullptr);
  return j;
}

int cmd_count(const CountArgs& a) {
  const Formula f = read_instance(a.path);
  json doc;
  doc["instance"] = {{"path", a.path},
                     {"instance_hash", hex64(instance_hash(f))},
                     {"semantics", to_string(f.semantics())},
                     {"n_vars", f.n_vars()},
                     {"n_clauses", f.n_clauses()},
                     {"n_pinned", f.n_pinned()}};

  if (a.exact) {
    doc["config"] = {{"mode", "exact"}};
    doc["n_solutions"] = exact_count(f);
    std::cout << doc.dump(2) << '\n';
    return kOk;
  }

  CircuitConfig cc;
  SampleBudget budget;
  try {
    cc.backend = backend_from_string(a.backend);
    budget.scheme = scheme_from_string(a.scheme);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  cc.depth = a.depth;
  cc.run_optimizer = !a.no_optimize;
  cc.two_level_energies = a.two_level;
  cc.qubit_cap = a.qubit_cap;
  cc.optimizer.max_evaluations = a.max_evals;
  cc.optimizer.tqa_dt = a.tqa_dt;
  budget.epsilon = a.eps;
  budget.delta = a.delta;
  budget.samples_per_step = a.ns ? *a.ns : samples_from_bound(f.n_vars(), a.eps, a.delta);
  try {
    cc.optimizer.validate();
    budget.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }

  doc["config"] = {{"mode", "estimate"},
                   {"backend", to_string(cc.backend)},
                   {"p", cc.depth},
                   {"ns", budget.samples_per_step},
                   {"eps", budget.epsilon},
                   {"delta", budget.delta},
                   {"scheme", to_string(budget.scheme)},
                   {"seed", a.seed},
                   {"optimize", cc.run_optimizer},
                   {"max_evaluations", cc.optimizer.max_evaluations},
                   {"tqa_dt", cc.optimizer.tqa_dt},
                   {"two_level", cc.two_level_energies},
                   {"qubit_cap", cc.qubit_cap}};

  cc.optimizer.seed = derive_seed(a.seed, streams::kOptimizer);
  const PreparedSampler sampler = prepare_sampler(f, cc);
  const CountEstimate run = vqcount::vqcount(f, sampler, budget, derive_seed(a.seed, streams::kRun));

  doc["optimizer"] = {{"initial_energy", sampler.initial_energy},
                      {"final_energy", sampler.final_energy},
                      {"evaluations", sampler.evaluations},
                      {"betas", sampler.angles.betas},
                      {"gammas", sampler.angles.gammas}};
  doc["status"] = to_string(run.status);
  doc["estimate"] = run.value();
  doc["estimate_exact"] = run.estimate.str();
  doc["totals"] = {{"raw_shots", run.total_raw_shots},
                   {"postselected", run.total_postselected},
                   {"distinct_used", run.total_distinct_used}};
  json steps = json::array();
  for (const auto& s : run.steps) steps.push_back(step_json(s));
  doc["steps"] = steps;
  if (run.status != RunStatus::Ok) {
    const bool first = run.steps.size() <= 1;
    doc["diagnosis"] = first ? "no solution observed at the first step (likely unsatisfiable)"
                             : "a reduced subproblem produced no solution before the stall cutoff";
  }
  if (a.check) {
    const std::uint64_t exact = exact_count(f);
    doc["check"] = {{"n_solutions", exact},
                    {"within_band", exact > 0 && within_band(run.estimate, exact, budget.epsilon)}};
  }
  std::cout << doc.dump(2) << '\n';
  return run.status == RunStatus::Ok ? kOk : kStall;
}

int cmd_sweep(const SweepArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw InputError("cannot open config " + a.config);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  const SweepSpec spec = SweepSpec::from_json(cfg);

  const fs::path csv_path = a.out + ".csv";
  std::vector<SweepRow> existing;
  if (a.resume && fs::exists(csv_path)) {
    std::ifstream prev(csv_path);
    existing = read_sweep_csv(prev);
  }
  SweepOptions opts;
  opts.jobs = a.jobs;
  opts.max_new_rows = a.max_rows;
  const auto rows = sweep(spec, existing, opts);

  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  {
    std::ofstream out(csv_path);
    write_sweep_csv(rows, out);
  }
  {
    std::ofstream out(a.out + "_aggregate.csv");
    write_aggregate_csv(aggregate(rows), out);
  }
  json doc = sweep_json(spec, rows);
  {
    std::ofstream out(a.out + ".json");
    out << doc.dump(1) << '\n';
  }

  std::map<std::string, std::size_t> by_status;
  for (const auto& r : rows) ++by_status[r.status];
  if (a.json_out) {
    std::cout << json{{"config", spec.to_json()},
                      {"config_hash", hex64(spec.config_hash())},
                      {"rows", rows.size()},
                      {"resumed_rows", existing.size()},
                      {"status_counts", by_status},
                      {"csv", csv_path.string()}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << rows.size() << " rows -> " << csv_path.string() << " (";
    bool first = true;
    for (const auto& [k, v] : by_status) {
      std::cout << (first ? "" : ", ") << k << '=' << v;
      first = false;
    }
    std::cout << ")\n";
  }
  return kOk;
}

double metric_value(const SweepRow& r, const std::string& metric) {
  if (metric == "raw_shots") return static_cast<double>(r.raw_shots);
  if (metric == "cumulative_raw_shots") return static_cast<double>(r.cumulative_raw_shots);
  if (metric == "postselected") return static_cast<double>(r.postselected);
  if (metric == "distinct_used") return static_cast<double>(r.distinct_used);
  if (metric == "rejection_draws") return static_cast<double>(r.rejection_draws);
  if (metric == "min_r") return r.min_r;
  if (metric == "max_eta") return r.max_eta;
  if (metric == "sampling_efficiency") return r.sampling_efficiency;
  throw UsageError("unknown metric '" + metric + "'");
}

int cmd_fit(const FitArgs& a) {
  const FitModel model = [&] {
    try {
      return fit_model_from_string(a.model);
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
  }();
  std::ifstream in(a.path);
  if (!in) throw InputError("cannot open " + a.path);
  std::string header;
  std::getline(in, header);
  in.seekg(0);

  std::vector<FitPoint> points;
  if (header.rfind("row_key,", 0) == 0) {
    // Sweep table: median of the metric per regressor value.
    std::map<double, std::vector<double>> groups;
    for (const auto& r : read_sweep_csv(in)) {
      if (!r.usable()) continue;
      if (!a.backend.empty() && r.backend != a.backend) continue;
      if (a.depth && r.depth != *a.depth) continue;
      if (a.eps && std::abs(r.epsilon - *a.eps) > 1e-12) continue;
      if (a.n && r.n != *a.n) continue;
      if (a.metric == "rejection_draws" && r.rejection_censored) continue;
      const double x = model == FitModel::InverseEps ? r.epsilon : static_cast<double>(r.n);
      groups[x].push_back(metric_value(r, a.metric));
    }
    for (const auto& [x, ys] : groups) points.push_back({x, summarize(ys).median});
  } else {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      try {
        points.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
      } catch (const std::exception&) {
        if (line_no == 1) continue;  // header
        throw ParseError("bad x,y line", line_no);
      }
    }
  }

  const FitResult fit = fit_scaling(points, model, a.tail);
  json pts = json::array();
  for (const auto& p : points) pts.push_back({p.x, p.y});
  json doc{{"config",
            {{"input", a.path}, {"model", to_string(model)}, {"tail", a.tail}, {"metric", a.metric}}},
           {"model", to_string(fit.model)},
           {"parameter", fit.parameter},
           {"prefactor", fit.prefactor},
           {"points_used", fit.points_used},
           {"residual", fit.residual},
           {"points", pts}};
  if (a.json_out) {
    std::cout << doc.dump(2) << '\n';
  } else if (model == FitModel::Exponential) {
    std::cout << "y ~ " << fit.prefactor << " * " << fit.parameter << "^n  (" << fit.points_used
              << " points, rms log residual " << fit.residual << ")\n";
  } else {
    std::cout << "y ~ " << fit.prefactor << " * x^" << fit.parameter << "  (" << fit.points_used
              << " points, rms log residual " << fit.residual << ")\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate model counting with simulated QAOA samplers"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate random instance files");
  g->add_option("--problem", gen.problem, "nae3sat or one3sat")->capture_default_str();
  g->add_option("--alpha", gen.alpha, "Clause density m/n (default 1 for nae3sat, 2/3 for one3sat)");
  g->add_option("--n", gen.n, "Number of variables")->required();
  g->add_option("--count", gen.count, "Number of instances")->capture_default_str();
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output directory")->capture_default_str();
  g->add_flag("--with-count", gen.with_count, "Report exact solution counts");
  g->add_flag("--json", gen.json_out, "Print a JSON summary");

  CountArgs cnt;
  auto* c = app.add_subcommand("count", "Estimate (or exactly count) solutions of an instance file");
  c->add_option("instance", cnt.path, "Instance file")->required();
  c->add_flag("--exact", cnt.exact, "Exhaustive count instead of estimation");
  c->add_option("--backend", cnt.backend, "qaoa, gmqaoa or uniform")->capture_default_str();
  c->add_option("--p", cnt.depth, "Circuit depth")->capture_default_str();
  c->add_option("--ns", cnt.ns, "Samples per step (default from the n^2/eps^2 bound)");
  c->add_option("--eps", cnt.eps, "Multiplicative error")->capture_default_str();
  c->add_option("--delta", cnt.delta, "Failure probability")->capture_default_str();
  c->add_option("--scheme", cnt.scheme, "distinct, replacement or exhaustive")->capture_default_str();
  c->add_option("--seed", cnt.seed, "Master seed")->capture_default_str();
  c->add_option("--max-evals", cnt.max_evals, "Optimizer evaluation budget")->capture_default_str();
  c->add_option("--tqa-dt", cnt.tqa_dt, "Ramp step for the initial angles")->capture_default_str();
  c->add_flag("--no-optimize", cnt.no_optimize, "Use the initial angles as-is");
  c->add_flag("--two-level", cnt.two_level, "Replace energies by 0 on solutions and 1 elsewhere");
  c->add_flag("--check", cnt.check, "Compare against the exact count");
  c->add_option("--qubit-cap", cnt.qubit_cap, "Largest simulated register")->capture_default_str();
  c->add_flag("--json", "Accepted for symmetry; output is always JSON");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Run an experiment grid from a JSON config");
  s->add_option("--config", sw.config, "Sweep config (see configs/sweep.schema.json)")->required();
  s->add_option("--out", sw.out, "Output prefix for .csv, .json and _aggregate.csv")->capture_default_str();
  s->add_flag("--resume", sw.resume, "Keep rows already present in the output CSV");
  s->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--max-rows", sw.max_rows, "Stop after this many new rows");
  s->add_flag("--json", sw.json_out, "Print a JSON summary");

  FitArgs ft;
  auto* fcmd = app.add_subcommand("fit", "Fit a scaling law to a sweep CSV or an x,y CSV");
  fcmd->add_option("input", ft.path, "CSV file")->required();
  fcmd->add_option("--model", ft.model, "exp, power or eps")->capture_default_str();
  fcmd->add_option("--tail", ft.tail, "Use only the last k points (0 = all)")->capture_default_str();
  fcmd->add_option("--metric", ft.metric, "Sweep column to fit")->capture_default_str();
  fcmd->add_option("--backend", ft.backend, "Filter sweep rows by backend");
  fcmd->add_option("--p", ft.depth, "Filter sweep rows by depth");
  fcmd->add_option("--eps", ft.eps, "Filter sweep rows by epsilon");
  fcmd->add_option("--n", ft.n, "Filter sweep rows by size");
  fcmd->add_flag("--json", ft.json_out, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (c->parsed()) return cmd_count(cnt);
    if (s->parsed()) return cmd_sweep(sw);
    if (fcmd->parsed()) return cmd_fit(ft);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kUsage;
}
