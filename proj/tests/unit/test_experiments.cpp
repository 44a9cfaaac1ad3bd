#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "vqcount/errors.hpp"
#include "vqcount/experiments.hpp"
#include "vqcount/ising.hpp"
#include "vqcount/qsim.hpp"
#include "vqcount/random.hpp"

using namespace vqcount;

namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.problem = Problem::Nae3Sat;
  s.sizes = {6, 8};
  s.depths = {1};
  s.epsilons = {1.0 / 3.0};
  s.backends = {Backend::GmQaoa, Backend::Qaoa};
  s.instances_per_size = 3;
  s.seed = 12;
  s.optimizer.max_evaluations = 20;
  s.rejection_max_draws = 100000;
  return s;
}

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(rows, out);
  return out.str();
}

}  // namespace

TEST(MinSamples, ThreeSolutionsUniformBackend) {
  const Formula f(3, {{0, 1, 2}}, Semantics::ExactlyOne);
  CircuitConfig cc;
  cc.backend = Backend::ExactUniform;
  const PreparedSampler sampler = prepare_sampler(f, cc);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ms = min_samples(f, sampler, 1.0 / 3.0, 3, seed);
    const double est = ms.estimate.convert_to<double>();
    EXPECT_GE(est, 2.25);
    EXPECT_LE(est, 4.0);
    EXPECT_TRUE(ms.within_band || ms.censored);
    EXPECT_LE(ms.samples_per_step, 4u);
    EXPECT_GE(ms.cumulative_raw_shots, ms.run.total_raw_shots);
  }
}

TEST(MinSamples, DoublingUntilBand) {
  const Formula f = generate({Problem::Nae3Sat, 10, {1, 1}, 3});
  const auto exact = exact_count(f);
  CircuitConfig cc;
  cc.backend = Backend::ExactUniform;
  const PreparedSampler sampler = prepare_sampler(f, cc);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ms = min_samples(f, sampler, 1.0 / 3.0, exact, seed);
    EXPECT_EQ(ms.samples_per_step, std::size_t{1} << (ms.attempts - 1));
    if (ms.within_band) EXPECT_TRUE(within_band(ms.estimate, exact, 1.0 / 3.0));
  }
  EXPECT_THROW(min_samples(f, sampler, 0.0, exact, 0), InputError);
  EXPECT_THROW(min_samples(f, sampler, 0.5, 0, 0), InputError);
}

TEST(MinSamples, TighterBandNeedsMoreSamples) {
  const Formula f = generate({Problem::Nae3Sat, 10, {1, 1}, 8});
  const auto exact = exact_count(f);
  CircuitConfig cc;
  cc.backend = Backend::ExactUniform;
  const PreparedSampler sampler = prepare_sampler(f, cc);
  std::vector<double> loose, tight;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    loose.push_back(static_cast<double>(min_samples(f, sampler, 1.0, exact, seed).samples_per_step));
    tight.push_back(static_cast<double>(min_samples(f, sampler, 0.1, exact, seed).samples_per_step));
  }
  EXPECT_LT(oracle::stats(loose).mean, oracle::stats(tight).mean);
}

TEST(Efficiency, Ratio) {
  EXPECT_DOUBLE_EQ(sampling_efficiency(66, 33), 2.0);
  EXPECT_DOUBLE_EQ(sampling_efficiency(10, 40), 0.25);
  EXPECT_THROW(sampling_efficiency(10, 0), InputError);
}

TEST(Fit, RecoversExponentialBase) {
  std::vector<FitPoint> pts;
  for (int n = 6; n <= 20; n += 2) pts.push_back({double(n), 3.0 * std::pow(1.41, n)});
  const auto r = fit_scaling(pts, FitModel::Exponential);
  EXPECT_NEAR(r.parameter, 1.41, 1e-9);
  EXPECT_NEAR(r.prefactor, 3.0, 1e-9);
  EXPECT_EQ(r.points_used, pts.size());
  EXPECT_NEAR(r.residual, 0.0, 1e-9);
}

TEST(Fit, PowerAndInverseEpsilon) {
  std::vector<FitPoint> pw, ie;
  for (double x : {4.0, 8.0, 16.0, 32.0}) pw.push_back({x, 0.5 * x * x});
  for (double e : {0.1, 0.2, 0.4, 0.8}) ie.push_back({e, 7.0 * std::pow(e, -2.0)});
  EXPECT_NEAR(fit_scaling(pw, FitModel::Power).parameter, 2.0, 1e-9);
  EXPECT_NEAR(fit_scaling(ie, FitModel::InverseEps).parameter, 2.0, 1e-9);
  EXPECT_NEAR(fit_scaling(ie, FitModel::InverseEps).prefactor, 7.0, 1e-9);
}

TEST(Fit, TailUsesLargestRegressors) {
  // small sizes follow a different law; the tail must ignore them
  std::vector<FitPoint> pts = {{2, 50.0}, {4, 40.0}};
  for (int n = 14; n >= 8; n -= 2) pts.push_back({double(n), std::pow(2.0, n)});
  const auto r = fit_scaling(pts, FitModel::Exponential, 4);
  EXPECT_EQ(r.points_used, 4u);
  EXPECT_NEAR(r.parameter, 2.0, 1e-9);
}

TEST(Fit, NoisyMonteCarloRecoversBase) {
  Rng rng(99);
  std::vector<FitPoint> pts;
  for (int n = 8; n <= 30; ++n) {
    const double noise = std::exp(0.1 * (rng.uniform() - 0.5));
    pts.push_back({double(n), 2.0 * std::pow(1.25, n) * noise});
  }
  EXPECT_NEAR(fit_scaling(pts, FitModel::Exponential).parameter, 1.25, 0.01);
}

TEST(Fit, Errors) {
  const std::vector<FitPoint> two = {{1, 1}, {2, 2}};
  EXPECT_THROW(fit_scaling(two, FitModel::Power), InputError);
  const std::vector<FitPoint> neg = {{1, 1}, {2, -2}, {3, 3}};
  EXPECT_THROW(fit_scaling(neg, FitModel::Exponential), InputError);
  const std::vector<FitPoint> same = {{2, 1}, {2, 2}, {2, 3}};
  EXPECT_THROW(fit_scaling(same, FitModel::Exponential), InputError);
  const std::vector<FitPoint> zero_x = {{0, 1}, {1, 2}, {2, 3}};
  EXPECT_THROW(fit_scaling(zero_x, FitModel::Power), InputError);
  EXPECT_THROW(fit_model_from_string("linear"), InputError);
  for (FitModel m : {FitModel::Exponential, FitModel::Power, FitModel::InverseEps}) {
    EXPECT_EQ(fit_model_from_string(to_string(m)), m);
  }
}

TEST(Summary, MatchesOracle) {
  const std::vector<double> v = {4, 1, 9, 2, 7, 3};
  const auto s = summarize(v);
  const auto o = oracle::stats(v);
  EXPECT_EQ(s.count, 6u);
  EXPECT_DOUBLE_EQ(s.mean, o.mean);
  EXPECT_DOUBLE_EQ(s.median, o.median);
  EXPECT_NEAR(s.sem, o.sem, 1e-12);
  EXPECT_EQ(summarize(std::vector<double>{}).count, 0u);
}

TEST(SweepSpecJson, RoundTripAndHash) {
  const SweepSpec s = small_spec();
  const SweepSpec back = SweepSpec::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  EXPECT_EQ(back.config_hash(), s.config_hash());

  SweepSpec grid = s;
  grid.sizes = {10};
  EXPECT_EQ(grid.config_hash(), s.config_hash());
  SweepSpec budget = s;
  budget.optimizer.max_evaluations = 21;
  EXPECT_NE(budget.config_hash(), s.config_hash());
}

TEST(SweepSpecJson, UnknownFieldIsNamed) {
  auto j = small_spec().to_json();
  j["instances"] = 5;
  try {
    SweepSpec::from_json(j);
    FAIL() << "accepted an unknown field";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("instances"), std::string::npos);
  }
  auto k = small_spec().to_json();
  k["optimizer"]["maxevals"] = 3;
  EXPECT_THROW(SweepSpec::from_json(k), InputError);
  auto m = small_spec().to_json();
  m.erase("sizes");
  EXPECT_THROW(SweepSpec::from_json(m), InputError);
}

TEST(SweepSpecJson, Validation) {
  SweepSpec s = small_spec();
  s.sizes = {30};
  EXPECT_THROW(s.validate(), InputError);
  s = small_spec();
  s.epsilons = {};
  EXPECT_THROW(s.validate(), InputError);
}

TEST(Sweep, DeterministicAndGmRowsUniform) {
  const SweepSpec spec = small_spec();
  const auto a = sweep(spec);
  const auto b = sweep(spec, {}, {2, std::nullopt});
  ASSERT_EQ(a.size(), 12u);
  EXPECT_EQ(csv_of(a), csv_of(b));
  for (const auto& r : a) {
    EXPECT_NE(r.status, "error");
    if (r.backend == "gmqaoa" && r.usable()) EXPECT_LE(r.max_eta, 1e-10);
    if (r.usable()) EXPECT_TRUE(within_band(r.estimate, double(r.n_solutions), r.epsilon));
  }
}

TEST(Sweep, ResumeMatchesFullRun) {
  const SweepSpec spec = small_spec();
  const auto full = sweep(spec);
  const auto partial = sweep(spec, {}, {1, 5});
  EXPECT_EQ(partial.size(), 5u);
  std::stringstream stored;
  write_sweep_csv(partial, stored);
  const auto resumed = sweep(spec, read_sweep_csv(stored));
  EXPECT_EQ(csv_of(resumed), csv_of(full));
}

TEST(Sweep, InstancesAreStableAcrossGrids) {
  SweepSpec s = small_spec();
  const auto before = sweep_instance(s, 8, 2);
  s.sizes = {8};
  s.depths = {3};
  EXPECT_EQ(sweep_instance(s, 8, 2).seed, before.seed);
}

TEST(SweepCsv, RoundTripAndErrors) {
  const auto rows = sweep(small_spec(), {}, {1, 3});
  std::stringstream buf;
  write_sweep_csv(rows, buf);
  const std::string text = buf.str();
  EXPECT_EQ(csv_of(read_sweep_csv(buf)), text);

  std::istringstream bad_header("row_key,oops\n");
  EXPECT_THROW(read_sweep_csv(bad_header), ParseError);
  std::istringstream short_row(text.substr(0, text.find('\n') + 1) + "abc,def\n");
  EXPECT_THROW(read_sweep_csv(short_row), ParseError);
}

TEST(Aggregate, CountsExclusions) {
  auto rows = sweep(small_spec());
  rows[0].status = "stalled";
  const auto agg = aggregate(rows);
  std::size_t included = 0, excluded = 0;
  for (const auto& g : agg) {
    included += g.included;
    excluded += g.excluded;
  }
  std::size_t usable = 0;
  for (const auto& r : rows) usable += r.usable();
  EXPECT_EQ(included, usable);
  EXPECT_EQ(included + excluded, rows.size());
  EXPECT_EQ(agg.size(), 4u);

  const auto j = sweep_json(small_spec(), rows);
  EXPECT_EQ(j.at("schema_version"), 1);
}

// With angles pi and a two-level spectrum the sampler is exact Grover search,
// so the success rate only rises with the solution density while the rotation
// has not passed the target. Exhaustive sampling keeps the true majority, so
// the density never falls along the chain.
TEST(GroverRegime, SuccessRateRisesWithDensityBeforeOvershoot) {
  for (std::size_t p = 1; p <= 3; ++p) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Formula f = generate({Problem::Nae3Sat, 6 + 2 * (seed % 4), {1, 1}, seed});
      if (exact_count(f) == 0) continue;
      CircuitConfig cc;
      cc.backend = Backend::GmQaoa;
      cc.depth = p;
      cc.run_optimizer = false;
      cc.two_level_energies = true;
      cc.angles = Angles{std::vector<double>(p, M_PI), std::vector<double>(p, M_PI)};
      SampleBudget b;
      b.scheme = SamplingScheme::Exhaustive;
      const auto run = vqcount::vqcount(f, cc, b, seed);
      double prev_r = -1.0;
      for (const auto& s : run.steps) {
        const double ratio = double(s.subproblem_solutions) / std::ldexp(1.0, int(s.qubits));
        const double theta = std::asin(std::sqrt(ratio));
        if (s.stalled || (2.0 * p + 1.0) * theta > M_PI / 2) break;
        EXPECT_NEAR(s.success_rate, oracle::grover_success(p, ratio), 1e-10);
        EXPECT_GE(s.success_rate, prev_r - 1e-12);
        prev_r = s.success_rate;
      }
    }
  }
}

TEST(DepthTrend, MedianSuccessRateGrowsWithDepth) {
  double prev = 0.0;
  for (std::size_t p = 1; p <= 3; ++p) {
    std::vector<double> rates;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Formula f = generate({Problem::Nae3Sat, 10, {1, 1}, seed});
      CircuitConfig cc;
      cc.depth = p;
      cc.optimizer.max_evaluations = 150;
      const PreparedSampler s = prepare_sampler(f, cc);
      const auto c = make_circuit(Mixer::X, energy_vector(build_ising(f)), s.angles.betas, s.angles.gammas);
      if (c.solutions.empty()) continue;
      rates.push_back(metrics(run_circuit(c), c).success_rate);
    }
    const double median = oracle::stats(rates).median;
    EXPECT_GE(median, prev - 1e-9) << "p=" << p;
    prev = median;
  }
}
