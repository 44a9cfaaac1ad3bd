#pragma once

#include <vector>

#include "vqcount/formula.hpp"
#include "vqcount/qsim.hpp"

namespace vqcount {

/// Gate-by-gate simulator over all n variables of a formula, used to
/// cross-check the diagonal-kernel path at small n. Pinned variables are real
/// qubits prepared with X^bit that receive no mixer gates; the phase separator
/// is built from ZZ and Z rotations of the unpinned model rather than from a
/// precomputed energy diagonal. Returns the full 2^n state (bit i = var i).
StateVector reference_simulate(const Formula& f, Mixer mixer, const std::vector<double>& betas,
                               const std::vector<double>& gammas);

/// Amplitudes of `full` on the basis states consistent with the pins of `f`,
/// reindexed over free variables (bit j <-> f.free_vars()[j]).
StateVector slice_pinned(const Formula& f, const StateVector& full);

}  // namespace vqcount
