#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vqcount/formula.hpp"

namespace vqcount {

/// Largest free-qubit count for which dense vectors are materialized.
inline constexpr std::size_t kDefaultQubitCap = 26;

/// How the 1-in-3 longitudinal field is attached: h_i = sign * weight * d_i
/// where d_i is the number of clauses containing variable i.
struct FieldConvention {
  int sign = -1;
  double weight = 1.0;

  std::string describe() const;
  bool operator==(const FieldConvention&) const = default;
};

struct Coupling {
  std::uint32_t i;
  std::uint32_t j;  // i < j, original variable indices
  double value;
};

struct Field {
  std::uint32_t var;
  double value;
};

/// H = -sum J_ij s_i s_j - sum h_i s_i + offset over the free spins, with
/// s = 2x - 1. Pinned spins are folded into fields and the offset.
struct IsingModel {
  std::size_t n_vars = 0;
  std::vector<std::uint32_t> free_vars;
  std::vector<Coupling> couplings;
  std::vector<Field> fields;
  double offset = 0.0;
  /// Energy of every satisfying configuration (sum of per-clause minima).
  double solution_energy = 0.0;

  std::size_t qubits() const noexcept { return free_vars.size(); }
  /// Energy of a full packed assignment. Pinned variables must carry their
  /// pinned bits for the result to be meaningful.
  double energy_of(std::uint64_t bits) const;
};

/// Diagonal of H over free configurations; bit j of the index is the value of
/// free_vars[j].
struct EnergyVector {
  std::vector<double> values;
  double solution_energy = 0.0;

  std::size_t qubits() const;
  std::size_t size() const noexcept { return values.size(); }
};

/// Triangle couplings J = -1 per clause (accumulated over shared pairs), the
/// 1-in-3 field from the calibrated convention, pins folded in.
IsingModel build_ising(const Formula& f);
IsingModel build_ising(const Formula& f, const FieldConvention& convention);

/// Throws ResourceError when the model has more than `cap` free spins.
EnergyVector energy_vector(const IsingModel& model, std::size_t cap = kDefaultQubitCap);

/// Replaces every energy with 0 on solutions and 1 elsewhere.
EnergyVector two_level(const EnergyVector& energies);

/// Ground configurations (indices with energy == solution_energy).
std::vector<std::uint32_t> solution_indices(const EnergyVector& energies);

struct MappingReport {
  FieldConvention convention;
  bool satisfiable = false;
  bool ground_equals_solutions = false;
  std::size_t n_solutions = 0;
  std::size_t n_ground = 0;
  double min_energy = 0.0;
  double solution_energy = 0.0;
  std::string note;
};

/// Exhaustive check that the ground space of build_ising(f) equals the
/// solution set of f. Tries the calibrated convention first and then the
/// alternatives; throws MappingError if none works on a satisfiable formula.
/// Unsatisfiable formulas are reported, not rejected. Requires n_vars <= 16.
MappingReport validate_mapping(const Formula& f);

/// Convention picked once per process for `s` by validating candidates on a
/// small calibration suite. NAE has no field; its entry is {+1, 0}.
const FieldConvention& field_convention(Semantics s);

/// Candidate conventions in the order they are tried.
std::vector<FieldConvention> candidate_conventions();

}  // namespace vqcount
