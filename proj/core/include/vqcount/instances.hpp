#pragma once

#include <cstdint>
#include <string>

#include "vqcount/formula.hpp"

namespace vqcount {

enum class Problem { Nae3Sat, OneIn3Sat };

std::string to_string(Problem p);
Problem problem_from_string(const std::string& text);

/// Clause density m/n as an exact fraction.
struct Ratio {
  std::uint32_t num = 1;
  std::uint32_t den = 1;

  double value() const { return static_cast<double>(num) / den; }
  std::string str() const;
  static Ratio parse(const std::string& text);
  bool operator==(const Ratio& o) const { return std::uint64_t{num} * o.den == std::uint64_t{o.num} * den; }
};

struct EnsembleSpec {
  Problem problem = Problem::Nae3Sat;
  std::size_t n_vars = 0;
  Ratio alpha{1, 1};
  std::uint64_t seed = 0;
};

/// Configuration-model samples are rejected and redrawn at most this often.
inline constexpr std::size_t kRejectionBudget = 100000;

/// Connected biregular factor graph: every clause has 3 distinct variables and
/// every variable sits in exactly 3*alpha clauses.
Formula gen_nae3sat(const EnsembleSpec& spec);

/// Random simple connected cubic graph with a clause per vertex and a variable
/// per edge (alpha = 2/3). Variables are numbered in edge-pairing order.
Formula gen_1in3sat(const EnsembleSpec& spec);

/// Dispatches on spec.problem.
Formula generate(const EnsembleSpec& spec);

/// Throws InputError when the degree arithmetic of `spec` is infeasible.
void validate_spec(const EnsembleSpec& spec);

/// Connectivity of the variable/clause incidence graph. Variables that appear
/// in no clause count as separate components.
bool factor_graph_connected(const Formula& f);

/// Per-variable clause occurrence counts.
std::vector<std::size_t> variable_degrees(const Formula& f);

}  // namespace vqcount
