#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vqcount/qsim.hpp"

namespace vqcount {

struct OptimizerConfig {
  /// Objective evaluations, initial point included.
  std::size_t max_evaluations = 500;
  double tqa_dt = 0.75;
  /// Stop once the simplex spread in objective value falls below this.
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  double initial_step = 0.1;
  /// Central-difference gradient descent on the best point after the simplex.
  bool gradient_refinement = false;

  void validate() const;
};

struct Angles {
  std::vector<double> betas;
  std::vector<double> gammas;
};

/// Linear ramp sampled at layer midpoints t_l = (l - 1/2) / p:
/// beta_l = (1 - t_l) * dt, gamma_l = t_l * dt.
Angles tqa_init(std::size_t depth, double dt);

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  /// Best objective seen after each evaluation.
  std::vector<double> best_trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead with standard coefficients. The seed picks the sign of each
/// initial simplex edge; everything else is deterministic.
MinimizeResult nelder_mead(const Objective& objective, std::vector<double> x0,
                           const OptimizerConfig& config);

struct OptimizationResult {
  QaoaCircuit circuit;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  std::size_t evaluations = 0;
  std::vector<double> best_trace;
};

/// Minimizes <psi|H|psi> over (betas, gammas) starting from the circuit's
/// current angles. Never returns angles worse than the starting ones.
OptimizationResult optimize(const QaoaCircuit& circuit, const OptimizerConfig& config);

}  // namespace vqcount
