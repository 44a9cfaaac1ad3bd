#include "vqcount/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

#include "vqcount/errors.hpp"

namespace vqcount {

std::string to_string(Mixer m) { return m == Mixer::X ? "qaoa" : "gmqaoa"; }

Mixer mixer_from_string(const std::string& text) {
  if (text == "qaoa" || text == "x") return Mixer::X;
  if (text == "gmqaoa" || text == "grover") return Mixer::Grover;
  throw InputError("unknown mixer '" + text + "' (expected qaoa or gmqaoa)");
}

std::size_t StateVector::qubits() const {
  return static_cast<std::size_t>(std::countr_zero(amps.size()));
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps.size());
  std::transform(amps.begin(), amps.end(), p.begin(), [](const Amplitude& a) { return std::norm(a); });
  return p;
}

// Phase table over the distinct energy levels.
struct EnergyLevels {
  std::vector<double> levels;
  std::vector<std::uint16_t> level_of;
  bool usable = false;
};

namespace {

EnergyLevels index_levels(const std::vector<double>& energies) {
  EnergyLevels out;
  out.level_of.resize(energies.size());
  std::vector<double> sorted(energies);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() > 4096) return out;
  out.levels = sorted;
  for (std::size_t x = 0; x < energies.size(); ++x) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), energies[x]);
    out.level_of[x] = static_cast<std::uint16_t>(it - sorted.begin());
  }
  out.usable = true;
  return out;
}

}  // namespace

QaoaCircuit make_circuit(Mixer mixer, EnergyVector energy, std::vector<double> betas,
                         std::vector<double> gammas) {
  if (betas.size() != gammas.size()) throw InputError("betas and gammas differ in length");
  if (energy.values.empty() || !std::has_single_bit(energy.values.size())) {
    throw InputError("energy vector length must be a power of two");
  }
  QaoaCircuit c;
  c.mixer = mixer;
  c.betas = std::move(betas);
  c.gammas = std::move(gammas);
  c.solutions = solution_indices(energy);
  c.levels = std::make_shared<const EnergyLevels>(index_levels(energy.values));
  c.energy = std::move(energy);
  return c;
}

namespace {

inline Amplitude mul(Amplitude a, Amplitude b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void apply_phase(std::vector<Amplitude>& amps, const std::vector<double>& energies,
                 const EnergyLevels& levels, double gamma) {
  if (levels.usable && levels.level_of.size() == amps.size()) {
    std::vector<Amplitude> phase(levels.levels.size());
    for (std::size_t l = 0; l < phase.size(); ++l) phase[l] = std::polar(1.0, -gamma * levels.levels[l]);
    for (std::size_t x = 0; x < amps.size(); ++x) amps[x] = mul(amps[x], phase[levels.level_of[x]]);
  } else {
    for (std::size_t x = 0; x < amps.size(); ++x) amps[x] = mul(amps[x], std::polar(1.0, -gamma * energies[x]));
  }
}

void apply_x_mixer(std::vector<Amplitude>& amps, double beta) {
  const double c = std::cos(beta);
  const double sn = std::sin(beta);
  const std::size_t dim = amps.size();
  for (std::size_t bit = 1; bit < dim; bit <<= 1) {
    for (std::size_t base = 0; base < dim; base += bit << 1) {
      for (std::size_t x = base; x < base + bit; ++x) {
        const Amplitude a0 = amps[x];
        const Amplitude a1 = amps[x | bit];
        // cos(b) a - i sin(b) a'
        amps[x] = {c * a0.real() + sn * a1.imag(), c * a0.imag() - sn * a1.real()};
        amps[x | bit] = {c * a1.real() + sn * a0.imag(), c * a1.imag() - sn * a0.real()};
      }
    }
  }
}

void apply_grover_mixer(std::vector<Amplitude>& amps, double beta) {
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(amps.size()));
  const Amplitude sum = std::accumulate(amps.begin(), amps.end(), Amplitude{0.0, 0.0});
  const Amplitude overlap = sum * inv_sqrt;
  const Amplitude shift = (Amplitude{1.0, 0.0} - std::polar(1.0, -beta)) * overlap * inv_sqrt;
  for (auto& a : amps) a -= shift;
}

}  // namespace

StateVector run_circuit(const QaoaCircuit& circuit, std::size_t cap) {
  const std::size_t k = circuit.qubits();
  if (k > cap) {
    throw ResourceError("circuit over " + std::to_string(k) + " qubits exceeds cap " + std::to_string(cap));
  }
  if (circuit.betas.size() != circuit.gammas.size()) throw InputError("betas and gammas differ in length");
  const std::size_t dim = circuit.energy.size();
  StateVector psi;
  psi.amps.assign(dim, Amplitude{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
  if (circuit.depth() == 0) return psi;

  std::optional<EnergyLevels> local;
  if (!circuit.levels) local = index_levels(circuit.energy.values);
  const EnergyLevels& levels = circuit.levels ? *circuit.levels : *local;
  for (std::size_t layer = 0; layer < circuit.depth(); ++layer) {
    apply_phase(psi.amps, circuit.energy.values, levels, circuit.gammas[layer]);
    if (circuit.mixer == Mixer::X) {
      apply_x_mixer(psi.amps, circuit.betas[layer]);
    } else {
      apply_grover_mixer(psi.amps, circuit.betas[layer]);
    }
  }
  for (const auto& a : psi.amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw NumericError("non-finite amplitude after circuit evaluation");
    }
  }
  return psi;
}

QaoaCircuit reduce_circuit(const QaoaCircuit& circuit, bool bit, EnergyVector new_energy) {
  if (circuit.qubits() == 0) throw InputError("cannot reduce a circuit with no free qubits");
  if (new_energy.size() * 2 != circuit.energy.size()) {
    throw InputError("reduced energy vector must cover exactly one fewer qubit");
  }
  QaoaCircuit out = make_circuit(circuit.mixer, std::move(new_energy), circuit.betas, circuit.gammas);
  out.pinned_bits = circuit.pinned_bits;
  out.pinned_bits.push_back(bit ? 1 : 0);
  return out;
}

double energy_expectation(const StateVector& psi, const std::vector<double>& energies) {
  double e = 0.0;
  for (std::size_t x = 0; x < psi.amps.size(); ++x) e += std::norm(psi.amps[x]) * energies[x];
  return e;
}

OutputMetrics metrics(const StateVector& psi, const std::vector<std::uint32_t>& solutions,
                      const std::vector<double>& energies) {
  if (energies.size() != psi.amps.size()) throw InputError("energy vector does not match the state");
  OutputMetrics m;
  m.n_solutions = solutions.size();
  for (auto x : solutions) {
    if (x >= psi.amps.size()) throw InputError("solution index outside the state");
    m.success_rate += std::norm(psi.amps[x]);
  }
  m.energy_expectation = energy_expectation(psi, energies);
  if (m.success_rate > 0.0 && !solutions.empty()) {
    const double uniform = 1.0 / static_cast<double>(solutions.size());
    double tvd = 0.0;
    for (auto x : solutions) tvd += std::abs(uniform - std::norm(psi.amps[x]) / m.success_rate);
    m.nonuniformity = 0.5 * tvd;
  }
  return m;
}

OutputMetrics metrics(const StateVector& psi, const QaoaCircuit& circuit) {
  return metrics(psi, circuit.solutions, circuit.energy.values);
}

SampleRecord sample_solutions(const StateVector& psi, const std::vector<std::uint32_t>& solutions,
                              const SampleRequest& request, Rng& rng) {
  SampleRecord rec;
  std::vector<double> cumulative(solutions.size());
  double r = 0.0;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    r += std::norm(psi.amps.at(solutions[i]));
    cumulative[i] = r;
  }

  std::size_t target = request.target;
  const bool distinct_mode = request.mode == SampleMode::WithoutReplacement;
  if (distinct_mode && request.cap_to_available && !solutions.empty()) {
    target = std::min(target, solutions.size());
  }
  if (target == 0) return rec;

  const double cutoff_d =
      request.stall_factor * static_cast<double>(request.target) / std::max(r, 1e-6);
  const std::uint64_t cutoff = static_cast<std::uint64_t>(std::ceil(cutoff_d));

  std::vector<std::uint8_t> seen(solutions.size(), 0);
  std::size_t collected = 0;
  std::uint64_t since_progress = 0;
  while (collected < target) {
    if (r <= 0.0) {
      rec.raw_shots += cutoff;
      rec.stalled = true;
      break;
    }
    const std::uint64_t gap = rng.geometric(std::min(r, 1.0));
    if (gap > cutoff - since_progress) {
      rec.raw_shots += cutoff - since_progress;
      rec.stalled = true;
      break;
    }
    rec.raw_shots += gap;
    since_progress += gap;
    const double u = rng.uniform() * r;
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    idx = std::min(idx, solutions.size() - 1);
    rec.postselected.push_back(solutions[idx]);
    if (!seen[idx]) {
      seen[idx] = 1;
      rec.distinct.push_back(solutions[idx]);
      if (distinct_mode) {
        ++collected;
        since_progress = 0;
      }
    }
    if (!distinct_mode) {
      ++collected;
      since_progress = 0;
    }
  }
  std::sort(rec.distinct.begin(), rec.distinct.end());
  return rec;
}

std::vector<std::uint64_t> measure_counts(const StateVector& psi, std::uint64_t shots, Rng& rng) {
  std::vector<double> cumulative(psi.amps.size());
  double total = 0.0;
  for (std::size_t x = 0; x < psi.amps.size(); ++x) {
    total += std::norm(psi.amps[x]);
    cumulative[x] = total;
  }
  std::vector<std::uint64_t> counts(psi.amps.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto idx = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    ++counts[std::min(idx, counts.size() - 1)];
  }
  return counts;
}

void dump_amplitudes(const StateVector& psi, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write amplitude dump " + path.string());
  auto put = [&](double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char bytes[8];
    std::memcpy(bytes, &bits, sizeof bytes);
    out.write(bytes, sizeof bytes);
  };
  for (const auto& a : psi.amps) {
    put(a.real());
    put(a.imag());
  }
}

}  // namespace vqcount
