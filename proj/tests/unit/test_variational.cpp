#include <gtest/gtest.h>

#include <cmath>

#include "vqcount/errors.hpp"
#include "vqcount/instances.hpp"
#include "vqcount/variational.hpp"

using namespace vqcount;

TEST(Variational, TqaRampValues) {
  const Angles a = tqa_init(3, 0.75);
  ASSERT_EQ(a.betas.size(), 3u);
  const double t[] = {1.0 / 6, 0.5, 5.0 / 6};
  for (int l = 0; l < 3; ++l) {
    EXPECT_DOUBLE_EQ(a.betas[l], (1 - t[l]) * 0.75);
    EXPECT_DOUBLE_EQ(a.gammas[l], t[l] * 0.75);
  }
  EXPECT_TRUE(tqa_init(0, 0.75).betas.empty());
}

TEST(Variational, NelderMeadFindsQuadraticMinimum) {
  OptimizerConfig cfg;
  cfg.max_evaluations = 2000;
  cfg.tolerance = 1e-14;
  const auto r = nelder_mead(
      [](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1) + 4 * (x[1] + 2) * (x[1] + 2) + 3; },
      {0.0, 0.0}, cfg);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], -2.0, 1e-5);
  EXPECT_NEAR(r.value, 3.0, 1e-9);
}

TEST(Variational, NelderMeadOnRosenbrock) {
  OptimizerConfig cfg;
  cfg.max_evaluations = 5000;
  cfg.tolerance = 1e-16;
  cfg.initial_step = 0.5;
  const auto r = nelder_mead(
      [](std::span<const double> x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
      },
      {-1.2, 1.0}, cfg);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 1e-3);
}

TEST(Variational, BudgetIsRespectedAndTraceMonotone) {
  OptimizerConfig cfg;
  cfg.max_evaluations = 37;
  std::size_t calls = 0;
  const auto r = nelder_mead(
      [&](std::span<const double> x) {
        ++calls;
        return std::sin(3 * x[0]) + x[1] * x[1] + std::cos(x[2]);
      },
      {0.3, 0.4, 0.5}, cfg);
  EXPECT_EQ(calls, 37u);
  EXPECT_EQ(r.evaluations, 37u);
  ASSERT_EQ(r.best_trace.size(), 37u);
  for (std::size_t i = 1; i < r.best_trace.size(); ++i) EXPECT_LE(r.best_trace[i], r.best_trace[i - 1]);
}

TEST(Variational, GradientRefinementDoesNotWorsen) {
  OptimizerConfig cfg;
  cfg.max_evaluations = 60;
  auto f = [](std::span<const double> x) { return std::pow(x[0] - 0.3, 2) + std::pow(x[1] - 0.7, 2); };
  const auto plain = nelder_mead(f, {0.0, 0.0}, cfg);
  cfg.max_evaluations = 120;
  cfg.gradient_refinement = true;
  const auto refined = nelder_mead(f, {0.0, 0.0}, cfg);
  EXPECT_LE(refined.value, plain.value);
}

TEST(Variational, NonFiniteObjectiveIsAnError) {
  OptimizerConfig cfg;
  EXPECT_THROW(nelder_mead([](std::span<const double>) { return NAN; }, {0.0}, cfg), NumericError);
}

TEST(Variational, ConfigValidation) {
  OptimizerConfig cfg;
  cfg.max_evaluations = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = {};
  cfg.initial_step = 0;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Variational, OptimizeLowersEnergy) {
  const Formula f = generate({Problem::Nae3Sat, 8, {1, 1}, 1});
  const Angles a = tqa_init(2, 0.75);
  const auto c = make_circuit(Mixer::X, energy_vector(build_ising(f)), a.betas, a.gammas);
  OptimizerConfig cfg;
  cfg.max_evaluations = 150;
  const auto r = optimize(c, cfg);
  EXPECT_LE(r.final_energy, r.initial_energy);
  EXPECT_EQ(r.circuit.depth(), 2u);
  EXPECT_NEAR(energy_expectation(run_circuit(r.circuit), r.circuit.energy.values), r.final_energy, 1e-12);
}

TEST(Variational, SeedOnlyChangesSimplexOrientation) {
  const Formula f = generate({Problem::Nae3Sat, 6, {1, 1}, 1});
  const auto c = make_circuit(Mixer::X, energy_vector(build_ising(f)), {0.5}, {0.2});
  OptimizerConfig cfg;
  cfg.max_evaluations = 40;
  cfg.seed = 5;
  const auto a = optimize(c, cfg);
  const auto b = optimize(c, cfg);
  EXPECT_EQ(a.circuit.betas, b.circuit.betas);
  EXPECT_EQ(a.final_energy, b.final_energy);
}

TEST(Variational, RampShapeAndZeroStep) {
  const Angles a = tqa_init(1, 0.75);
  EXPECT_DOUBLE_EQ(a.betas[0], 0.375);
  EXPECT_DOUBLE_EQ(a.gammas[0], 0.375);
  const Angles b = tqa_init(2, 0.75);
  EXPECT_GT(b.betas[0], b.betas[1]);
  EXPECT_LT(b.gammas[0], b.gammas[1]);
  for (double v : tqa_init(4, 0.0).betas) EXPECT_EQ(v, 0.0);
}

TEST(Variational, SingleEvaluationKeepsStartingAngles) {
  const Formula f = generate({Problem::Nae3Sat, 6, {1, 1}, 3});
  const auto c = make_circuit(Mixer::X, energy_vector(build_ising(f)), {0.4, 0.1}, {0.2, 0.3});
  OptimizerConfig cfg;
  cfg.max_evaluations = 1;
  const auto r = optimize(c, cfg);
  EXPECT_EQ(r.circuit.betas, c.betas);
  EXPECT_EQ(r.circuit.gammas, c.gammas);
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(Variational, OneQubitToyMatchesGridScan) {
  EnergyVector ev;
  ev.values = {0.0, 2.0};
  ev.solution_energy = 0.0;
  // grid scan oracle over one period in each angle
  double best = 1e9;
  const int steps = 100;
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      const double beta = M_PI * i / steps, gamma = M_PI * j / steps;
      const double p0 = 0.5 * (1.0 - std::sin(2 * beta) * std::sin(2 * gamma));
      best = std::min(best, 2.0 * (1.0 - p0));
    }
  }
  const Angles a = tqa_init(1, 0.75);
  OptimizerConfig cfg;
  cfg.tolerance = 1e-12;
  const auto r = optimize(make_circuit(Mixer::X, ev, a.betas, a.gammas), cfg);
  EXPECT_NEAR(r.final_energy, best, 1e-3);
}

TEST(Variational, OptimizedCircuitsBeatUniformSuccessRate) {
  int better = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Formula f = generate({Problem::Nae3Sat, 12, {1, 1}, seed});
    const Angles a = tqa_init(3, 0.75);
    const auto c = make_circuit(Mixer::X, energy_vector(build_ising(f)), a.betas, a.gammas);
    if (c.solutions.empty()) continue;
    OptimizerConfig cfg;
    cfg.max_evaluations = 150;
    const auto r = optimize(c, cfg);
    const double baseline = static_cast<double>(c.solutions.size()) / 4096.0;
    better += metrics(run_circuit(r.circuit), r.circuit).success_rate > baseline;
  }
  EXPECT_GE(better, 16);
}
