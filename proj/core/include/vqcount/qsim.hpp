#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vqcount/ising.hpp"
#include "vqcount/random.hpp"

namespace vqcount {

using Amplitude = std::complex<double>;

enum class Mixer { X, Grover };

std::string to_string(Mixer m);
Mixer mixer_from_string(const std::string& text);

struct StateVector {
  std::vector<Amplitude> amps;

  std::size_t qubits() const;
  double norm_squared() const;
  std::vector<double> probabilities() const;
};

struct EnergyLevels;

/// Depth-p alternating circuit over the free qubits of a (possibly reduced)
/// problem. `pinned_bits` records the bits fixed by reduce_circuit, in order.
struct QaoaCircuit {
  Mixer mixer = Mixer::X;
  std::vector<double> betas;
  std::vector<double> gammas;
  EnergyVector energy;
  std::vector<std::uint32_t> solutions;  // sorted ground-space indices
  std::vector<std::uint8_t> pinned_bits;
  /// Distinct-level index of `energy`, filled by make_circuit.
  std::shared_ptr<const EnergyLevels> levels;

  std::size_t depth() const noexcept { return betas.size(); }
  std::size_t qubits() const { return energy.qubits(); }
};

QaoaCircuit make_circuit(Mixer mixer, EnergyVector energy, std::vector<double> betas,
                         std::vector<double> gammas);

/// Uniform start, then per layer amps *= exp(-i gamma E) followed by the
/// mixer: exp(-i beta X) on every qubit, or the Grover reflection
/// psi -> psi - (1 - e^{-i beta}) <psi0|psi> psi0 with psi0 uniform.
StateVector run_circuit(const QaoaCircuit& circuit, std::size_t cap = kDefaultQubitCap);

/// Pins the lowest free qubit to `bit`: same angles, one fewer qubit, energies
/// of the pinned model. The pinned qubit stays in |bit> under the phase
/// separator and loses its mixer, so it factors out of the state.
QaoaCircuit reduce_circuit(const QaoaCircuit& circuit, bool bit, EnergyVector new_energy);

struct OutputMetrics {
  double success_rate = 0.0;
  /// Total variation distance of the postselected distribution from uniform.
  /// Empty when success_rate is 0.
  std::optional<double> nonuniformity;
  double energy_expectation = 0.0;
  std::size_t n_solutions = 0;
};

OutputMetrics metrics(const StateVector& psi, const QaoaCircuit& circuit);
OutputMetrics metrics(const StateVector& psi, const std::vector<std::uint32_t>& solutions,
                      const std::vector<double>& energies);

/// <psi|H|psi> from the energy diagonal.
double energy_expectation(const StateVector& psi, const std::vector<double>& energies);

enum class SampleMode { WithoutReplacement, WithReplacement };

struct SampleRequest {
  std::size_t target = 1;
  SampleMode mode = SampleMode::WithoutReplacement;
  /// Without replacement, stop once every ground state has been seen.
  bool cap_to_available = true;
  /// Stall after stall_factor * target / max(r, 1e-6) raw shots without progress.
  double stall_factor = 50.0;
};

struct SampleRecord {
  std::uint64_t raw_shots = 0;
  std::vector<std::uint32_t> postselected;  // in draw order, with repeats
  std::vector<std::uint32_t> distinct;      // sorted
  bool stalled = false;

  /// Samples used by the estimator: distinct set or the full multiset.
  const std::vector<std::uint32_t>& used(SampleMode mode) const {
    return mode == SampleMode::WithoutReplacement ? distinct : postselected;
  }
};

/// Measures `psi` until `request.target` solutions are collected. Raw shots
/// are simulated exactly: the gap to the next solution is geometric in r and
/// the solution itself is drawn from the postselected distribution.
SampleRecord sample_solutions(const StateVector& psi, const std::vector<std::uint32_t>& solutions,
                              const SampleRequest& request, Rng& rng);

/// Plain computational-basis measurement; returns per-outcome counts.
std::vector<std::uint64_t> measure_counts(const StateVector& psi, std::uint64_t shots, Rng& rng);

/// Little-endian interleaved re/im doubles.
void dump_amplitudes(const StateVector& psi, const std::filesystem::path& path);

}  // namespace vqcount
