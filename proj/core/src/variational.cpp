#include "vqcount/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vqcount/errors.hpp"
#include "vqcount/random.hpp"

namespace vqcount {

void OptimizerConfig::validate() const {
  if (max_evaluations < 1) throw InputError("optimizer needs at least one evaluation");
  if (!(tqa_dt >= 0.0) || !std::isfinite(tqa_dt)) throw InputError("tqa_dt must be finite and non-negative");
  if (!(tolerance >= 0.0)) throw InputError("tolerance must be non-negative");
  if (!(initial_step > 0.0)) throw InputError("initial_step must be positive");
}

Angles tqa_init(std::size_t depth, double dt) {
  Angles a;
  a.betas.resize(depth);
  a.gammas.resize(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    const double t = (static_cast<double>(l) + 0.5) / static_cast<double>(depth);
    a.betas[l] = (1.0 - t) * dt;
    a.gammas[l] = t * dt;
  }
  return a;
}

namespace {

// Budgeted evaluation with best-so-far bookkeeping.
class Evaluator {
 public:
  Evaluator(const Objective& f, std::size_t budget) : f_(f), budget_(budget) {}

  bool exhausted() const { return result_.evaluations >= budget_; }

  double operator()(const std::vector<double>& x) {
    const double v = f_(x);
    if (!std::isfinite(v)) throw NumericError("objective returned a non-finite value");
    ++result_.evaluations;
    if (result_.best_trace.empty() || v < result_.value) {
      result_.value = v;
      result_.x = x;
    }
    result_.best_trace.push_back(result_.value);
    return v;
  }

  MinimizeResult take() { return std::move(result_); }
  const MinimizeResult& best() const { return result_; }

 private:
  const Objective& f_;
  std::size_t budget_;
  MinimizeResult result_;
};

void simplex_search(Evaluator& eval, std::vector<double> x0, const OptimizerConfig& config) {
  const std::size_t n = x0.size();
  if (n == 0 || eval.exhausted()) return;

  Rng rng(config.seed);
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(pts[0]);
  for (std::size_t i = 0; i < n; ++i) {
    if (eval.exhausted()) return;
    const double sign = (rng.next() & 1U) ? -1.0 : 1.0;
    pts[i + 1][i] += sign * config.initial_step;
    vals[i + 1] = eval(pts[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  while (!eval.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) diameter = std::max(diameter, std::abs(pts[i][d] - pts[best][d]));
    }
    if (vals[worst] - vals[best] < config.tolerance && diameter < std::sqrt(config.tolerance)) return;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);
    }
    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t d = 0; d < n; ++d) out[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
    };

    along(-1.0, trial);
    const double reflected = eval(trial);
    if (reflected < vals[best]) {
      if (eval.exhausted()) return;
      along(-2.0, trial2);
      const double expanded = eval(trial2);
      if (expanded < reflected) {
        pts[worst] = trial2;
        vals[worst] = expanded;
      } else {
        pts[worst] = trial;
        vals[worst] = reflected;
      }
      continue;
    }
    if (reflected < vals[second]) {
      pts[worst] = trial;
      vals[worst] = reflected;
      continue;
    }
    if (eval.exhausted()) return;
    const bool outside = reflected < vals[worst];
    along(outside ? -0.5 : 0.5, trial2);
    const double contracted = eval(trial2);
    if (contracted < std::min(reflected, vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      if (eval.exhausted()) return;
      for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
      vals[i] = eval(pts[i]);
    }
  }
}

void gradient_refine(Evaluator& eval, const OptimizerConfig& config) {
  const double h = 1e-5;
  std::vector<double> x = eval.best().x;
  double fx = eval.best().value;
  const std::size_t n = x.size();
  std::vector<double> grad(n), trial(n);
  while (!eval.exhausted() && eval.best().evaluations + 2 * n + 1 <= config.max_evaluations) {
    for (std::size_t d = 0; d < n; ++d) {
      trial = x;
      trial[d] = x[d] + h;
      const double up = eval(trial);
      trial[d] = x[d] - h;
      const double down = eval(trial);
      grad[d] = (up - down) / (2 * h);
    }
    const double gnorm = std::sqrt(std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0));
    if (gnorm < config.tolerance) return;
    bool improved = false;
    for (double t = 0.1 / gnorm; t > 1e-10 && !eval.exhausted(); t *= 0.5) {
      for (std::size_t d = 0; d < n; ++d) trial[d] = x[d] - t * grad[d];
      const double ft = eval(trial);
      if (ft < fx) {
        x = trial;
        fx = ft;
        improved = true;
        break;
      }
    }
    if (!improved) return;
  }
}

}  // namespace

MinimizeResult nelder_mead(const Objective& objective, std::vector<double> x0,
                           const OptimizerConfig& config) {
  config.validate();
  Evaluator eval(objective, config.max_evaluations);
  if (x0.empty()) {
    eval(x0);
    return eval.take();
  }
  simplex_search(eval, x0, config);
  if (config.gradient_refinement) gradient_refine(eval, config);
  return eval.take();
}

OptimizationResult optimize(const QaoaCircuit& circuit, const OptimizerConfig& config) {
  const std::size_t p = circuit.depth();
  QaoaCircuit work = circuit;
  auto objective = [&](std::span<const double> x) {
    std::copy(x.begin(), x.begin() + p, work.betas.begin());
    std::copy(x.begin() + p, x.end(), work.gammas.begin());
    return energy_expectation(run_circuit(work), work.energy.values);
  };
  std::vector<double> x0(circuit.betas);
  x0.insert(x0.end(), circuit.gammas.begin(), circuit.gammas.end());

  MinimizeResult m = nelder_mead(objective, x0, config);

  OptimizationResult out;
  out.circuit = circuit;
  std::copy(m.x.begin(), m.x.begin() + p, out.circuit.betas.begin());
  std::copy(m.x.begin() + p, m.x.end(), out.circuit.gammas.begin());
  out.initial_energy = m.best_trace.front();
  out.final_energy = m.value;
  out.evaluations = m.evaluations;
  out.best_trace = std::move(m.best_trace);
  return out;
}

}  // namespace vqcount
